// The 120-degree point (-1/2,-1/2,-1/2): quantum, spin-1/2 raffles, spin-1 raffles.

#include <iostream>

#include "corrgeo/quantum.hpp"
#include "corrgeo/raffles.hpp"

using namespace corrgeo;

int main()
{
    const std::array<Rational, 3> chi{Rational(-1, 2), Rational(-1, 2), Rational(-1, 2)};
    std::cout << "elliptope value: " << elliptope_value({-0.5, -0.5, -0.5}) << " ("
              << to_string(is_in_elliptope({-0.5, -0.5, -0.5})) << ")\n";

    const auto dirs = saturate({-0.5, -0.5, -0.5}, 1);
    const auto q = chi_triple(1, dirs);
    std::cout << "spin-1/2 singlet at 120 degrees: " << q.chi_ab << " " << q.chi_ac << " " << q.chi_bc << "\n";

    for (int spin2 : {1, 2}) {
        const auto cert = feasible(BalancedValueSet(spin2), chi);
        std::cout << "2s = " << spin2 << ": ";
        if (cert.feasible) {
            std::cout << "raffle exists\n";
            for (const auto& [t, p] : cert.witness->tickets()) std::cout << "  " << ticket_to_string(t) << " with probability " << to_compact_string(p) << "\n";
        } else {
            std::cout << "no raffle, violates " << chi_inequality_string(*cert.facet) << "\n";
        }
    }
}
