// Facets of the CHSH correlation polytope, printed as Bell-type inequalities.

#include <iostream>

#include "corrgeo/events.hpp"

using namespace corrgeo;

int main()
{
    const EventSystem sys = chsh_event_system();
    const char* names[] = {"p1", "p2", "p3", "p4", "p13", "p14", "p23", "p24"};
    const VPolytope v = correlation_polytope(sys);
    const HPolytope h = boole_conditions(sys);
    std::cout << v.size() << " vertices, " << h.size() << " facets\n";
    for (const auto& f : h.halfspaces()) {
        std::string lhs;
        for (std::size_t i = 0; i < f.a.size(); ++i) {
            if (f.a[i] == 0) continue;
            const bool neg = f.a[i] < 0;
            const Rational mag = neg ? Rational(-f.a[i]) : f.a[i];
            if (lhs.empty()) lhs += neg ? "-" : "";
            else lhs += neg ? " - " : " + ";
            if (mag != 1) lhs += to_compact_string(mag) + "*";
            lhs += names[i];
        }
        std::cout << "  " << lhs << " >= " << to_compact_string(-f.offset) << "\n";
    }
}
