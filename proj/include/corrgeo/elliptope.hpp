#ifndef CORRGEO_ELLIPTOPE_HPP
#define CORRGEO_ELLIPTOPE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "corrgeo/error.hpp"

namespace corrgeo {

/// Anti-correlation coefficients between the two parties for the setting
/// pairs (a,b), (a,c) and (b,c). Each is the negated Pearson coefficient.
struct CorrelationTriple {
    double chi_ab = 0.0;
    double chi_ac = 0.0;
    double chi_bc = 0.0;

    std::array<double, 3> as_array() const { return {chi_ab, chi_ac, chi_bc}; }
    bool operator==(const CorrelationTriple&) const = default;
};

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

inline constexpr double default_elliptope_tolerance = 1e-12;

/// 1 - ab^2 - ac^2 - bc^2 + 2 ab ac bc: the determinant of the unit-diagonal
/// correlation matrix. Nonnegative exactly on the elliptope (within the cube).
inline double elliptope_value(const CorrelationTriple& t)
{
    const double ab = t.chi_ab, ac = t.chi_ac, bc = t.chi_bc;
    return 1.0 - ab * ab - ac * ac - bc * bc + 2.0 * ab * ac * bc;
}

enum class ElliptopeVerdict { Inside, Boundary, Outside };

inline std::string to_string(ElliptopeVerdict v)
{
    switch (v) {
    case ElliptopeVerdict::Inside: return "INSIDE";
    case ElliptopeVerdict::Boundary: return "BOUNDARY";
    case ElliptopeVerdict::Outside: return "OUTSIDE";
    }
    return "UNKNOWN";
}

inline ElliptopeVerdict is_in_elliptope(const CorrelationTriple& t, double tol = default_elliptope_tolerance)
{
    const double value = elliptope_value(t);
    const auto chis = t.as_array();
    const bool strictly_inside_cube = std::all_of(chis.begin(), chis.end(), [&](double c) { return std::abs(c) < 1.0 - tol; });
    const bool touches_cube = std::any_of(chis.begin(), chis.end(), [&](double c) { return std::abs(std::abs(c) - 1.0) <= tol; });
    const bool outside_cube = std::any_of(chis.begin(), chis.end(), [&](double c) { return std::abs(c) > 1.0 + tol; });
    if (outside_cube) return ElliptopeVerdict::Outside;
    if (value > tol && strictly_inside_cube) return ElliptopeVerdict::Inside;
    if (std::abs(value) <= tol || (touches_cube && value >= -tol)) return ElliptopeVerdict::Boundary;
    return ElliptopeVerdict::Outside;
}

/// Three unit vectors whose pairwise dot products are the triple, in the
/// canonical gauge a = (1,0,0), b in the xy-plane with b_y >= 0, c_z >= 0.
struct GramRealization {
    Vec3 a{};
    Vec3 b{};
    Vec3 c{};

    CorrelationTriple cosines() const { return {dot3(a, b), dot3(a, c), dot3(b, c)}; }

    /// |w1 a + w2 b + w3 c|^2, which equals w^T C w for the correlation matrix C
    /// and is therefore never negative.
    double quadratic_form(const Vec3& w) const
    {
        Vec3 s{};
        for (std::size_t i = 0; i < 3; ++i) s[i] = w[0] * a[i] + w[1] * b[i] + w[2] * c[i];
        return dot3(s, s);
    }

    /// Largest deviation of the realized cosines from `target`.
    double residual(const CorrelationTriple& target) const
    {
        const auto got = cosines().as_array();
        const auto want = target.as_array();
        double r = 0.0;
        for (std::size_t i = 0; i < 3; ++i) r = std::max(r, std::abs(got[i] - want[i]));
        return r;
    }
};

/// Cholesky factorization of [[1,ab,ac],[ab,1,bc],[ac,bc,1]] read row-wise as
/// vectors. Boundary triples (singular matrices) give coplanar vectors.
inline GramRealization gram_vectors(const CorrelationTriple& t)
{
    if (is_in_elliptope(t, default_elliptope_tolerance) == ElliptopeVerdict::Outside) {
        fail(ErrorKind::NotInElliptope, "triple (" + std::to_string(t.chi_ab) + ", " + std::to_string(t.chi_ac) + ", " + std::to_string(t.chi_bc) + ") is outside the elliptope");
    }
    const double ab = std::clamp(t.chi_ab, -1.0, 1.0);
    const double ac = std::clamp(t.chi_ac, -1.0, 1.0);
    const double bc = std::clamp(t.chi_bc, -1.0, 1.0);

    GramRealization g;
    g.a = {1.0, 0.0, 0.0};
    const double by = std::sqrt(std::max(0.0, 1.0 - ab * ab));
    g.b = {ab, by, 0.0};

    const double c_perp = std::sqrt(std::max(0.0, 1.0 - ac * ac));  // |c| outside the a axis
    double cy = 0.0;
    double cz = 0.0;
    if (by > 1e-12) {
        cy = std::clamp((bc - ab * ac) / by, -c_perp, c_perp);
        // cz^2 = det / (1 - ab^2); avoids the cancellation in c_perp^2 - cy^2
        cz = std::sqrt(std::max(0.0, elliptope_value({ab, ac, bc})) / (by * by));
        cz = std::min(cz, std::sqrt(std::max(0.0, c_perp * c_perp - cy * cy)));
    } else {
        // b = +-a, so bc = ab * ac is forced; put c in the xy-plane.
        cy = c_perp;
    }
    g.c = {ac, cy, cz};
    return g;
}

/// Points of the elliptope surface over an n x n grid in (chi_ab, chi_ac),
/// both roots chi_bc = ab*ac -+ sqrt((1-ab^2)(1-ac^2)) per grid node (one when
/// they coincide), in ascending chi_bc order.
inline std::vector<CorrelationTriple> boundary_mesh(std::size_t n)
{
    if (n < 2) fail(ErrorKind::DimensionMismatch, "mesh resolution must be at least 2");
    std::vector<CorrelationTriple> out;
    out.reserve(2 * n * n);
    auto grid = [n](std::size_t i) {
        if (2 * i + 1 == n) return 0.0;
        return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double ab = grid(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double ac = grid(j);
            const double centre = ab * ac;
            const double spread = std::sqrt(std::max(0.0, (1.0 - ab * ab) * (1.0 - ac * ac)));
            out.push_back({ab, ac, std::clamp(centre - spread, -1.0, 1.0)});
            if (spread > 0.0) out.push_back({ab, ac, std::clamp(centre + spread, -1.0, 1.0)});
        }
    }
    return out;
}

} // namespace corrgeo

#endif
