// Singlet anti-correlation versus angle for several spins, next to cos(theta).

#include <cmath>
#include <cstdio>

#include "corrgeo/quantum.hpp"

using namespace corrgeo;

int main()
{
    constexpr double pi = 3.14159265358979323846;
    const Vec3 z{0, 0, 1};
    std::printf("%6s %10s", "angle", "cos");
    for (int spin2 = 1; spin2 <= 4; ++spin2) std::printf("   2s=%d    ", spin2);
    std::printf("\n");
    for (int deg = 0; deg <= 180; deg += 30) {
        const Vec3 b = direction_from_spherical(deg * pi / 180.0, 0.3);
        std::printf("%6d %10.6f", deg, std::cos(deg * pi / 180.0));
        for (int spin2 = 1; spin2 <= 4; ++spin2) std::printf(" %10.6f", chi_quantum(spin2, z, b));
        std::printf("\n");
    }
}
