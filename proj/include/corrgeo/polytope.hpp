#ifndef CORRGEO_POLYTOPE_HPP
#define CORRGEO_POLYTOPE_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corrgeo/double_description.hpp"
#include "corrgeo/error.hpp"
#include "corrgeo/exact_linalg.hpp"
#include "corrgeo/rational.hpp"
#include "corrgeo/simplex.hpp"

namespace corrgeo {

inline constexpr std::size_t max_polytope_dim = 10;
inline constexpr std::size_t max_polytope_vertices = 4096;

/// a . x + offset >= 0
struct Halfspace {
    RVector a;
    Rational offset;

    Rational slack(const RVector& x) const { return dot(a, x) + offset; }

    /// Same inequality rescaled to coprime integer coefficients.
    Halfspace normalized() const
    {
        RVector all = a;
        all.push_back(offset);
        all = to_primitive_integers(all);
        Rational off = all.back();
        all.pop_back();
        return {std::move(all), std::move(off)};
    }

    auto operator<=>(const Halfspace& other) const
    {
        if (a != other.a) return a < other.a ? std::weak_ordering::less : std::weak_ordering::greater;
        if (offset != other.offset) return offset < other.offset ? std::weak_ordering::less : std::weak_ordering::greater;
        return std::weak_ordering::equivalent;
    }
    bool operator==(const Halfspace& other) const { return a == other.a && offset == other.offset; }
};

inline Halfspace negated(const Halfspace& h)
{
    Halfspace out{h.a, -h.offset};
    for (auto& c : out.a) c = -c;
    return out;
}

/// Vertex representation. Vertices are kept distinct and in lexicographic order.
class VPolytope {
public:
    VPolytope() = default;

    /// Takes `vertices` as given (after sorting and deduplication); use
    /// `hull` when the input may contain non-extremal points.
    VPolytope(std::size_t dim, std::vector<RVector> vertices) : dim_(dim), vertices_(std::move(vertices))
    {
        for (const auto& v : vertices_) {
            if (v.size() != dim_) fail(ErrorKind::DimensionMismatch, "vertex length differs from polytope dimension");
        }
        std::sort(vertices_.begin(), vertices_.end());
        vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    }

    static VPolytope hull(std::size_t dim, std::vector<RVector> points);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<RVector>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    bool empty() const noexcept { return vertices_.empty(); }

    bool operator==(const VPolytope&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<RVector> vertices_;
};

/// Halfspace representation; affine-hull equalities appear as opposite pairs.
class HPolytope {
public:
    HPolytope() = default;
    HPolytope(std::size_t dim, std::vector<Halfspace> halfspaces) : dim_(dim), halfspaces_(std::move(halfspaces))
    {
        for (auto& h : halfspaces_) {
            if (h.a.size() != dim_) fail(ErrorKind::DimensionMismatch, "halfspace length differs from polytope dimension");
            h = h.normalized();
        }
        std::sort(halfspaces_.begin(), halfspaces_.end());
        halfspaces_.erase(std::unique(halfspaces_.begin(), halfspaces_.end()), halfspaces_.end());
    }

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Halfspace>& halfspaces() const noexcept { return halfspaces_; }
    std::size_t size() const noexcept { return halfspaces_.size(); }

    bool has(const Halfspace& h) const
    {
        return std::binary_search(halfspaces_.begin(), halfspaces_.end(), h.normalized());
    }

    /// True when the opposite inequality is also present (an affine-hull equality).
    bool is_equality(const Halfspace& h) const { return has(negated(h)); }

    /// Facets proper, without the affine-hull equality pairs.
    std::vector<Halfspace> proper_facets() const
    {
        std::vector<Halfspace> out;
        for (const auto& h : halfspaces_) {
            if (!is_equality(h)) out.push_back(h);
        }
        return out;
    }

    bool operator==(const HPolytope&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<Halfspace> halfspaces_;
};

namespace detail {

struct AffineHull {
    std::vector<std::size_t> free_coords;  // coordinates that parametrize the hull
    std::vector<Halfspace> equalities;     // one per codimension, as a . x + a0 = 0
};

inline AffineHull affine_hull(const std::vector<RVector>& points, std::size_t dim)
{
    AffineHull hull;
    exact::Matrix diffs;
    for (std::size_t i = 1; i < points.size(); ++i) {
        RVector d(dim);
        for (std::size_t k = 0; k < dim; ++k) d[k] = points[i][k] - points[0][k];
        diffs.push_back(std::move(d));
    }
    hull.free_coords = exact::row_reduce(diffs, dim).pivots;
    for (auto& n : exact::null_space(diffs, dim)) {
        Halfspace eq{n, -dot(n, points[0])};
        hull.equalities.push_back(eq.normalized());
    }
    return hull;
}

inline RVector restrict_to(const RVector& x, const std::vector<std::size_t>& coords)
{
    RVector out;
    out.reserve(coords.size());
    for (auto c : coords) out.push_back(x[c]);
    return out;
}

/// Facets of conv(points) within its affine hull, plus incidence over points.
struct HullFacets {
    AffineHull hull;
    std::vector<Halfspace> facets;        // in ambient coordinates
    std::vector<IncidenceSet> incidence;  // points tight on each facet
};

inline HullFacets hull_facets(const std::vector<RVector>& points, std::size_t dim)
{
    HullFacets out;
    out.hull = affine_hull(points, dim);
    const std::size_t r = out.hull.free_coords.size();
    if (r == 0) return out;

    exact::Matrix rows;
    rows.reserve(points.size());
    for (const auto& p : points) {
        RVector row{Rational(1)};
        for (auto c : out.hull.free_coords) row.push_back(p[c]);
        rows.push_back(std::move(row));
    }
    for (auto& ray : extreme_rays(rows, r + 1)) {
        Halfspace h{RVector(dim, Rational(0)), ray.direction[0]};
        for (std::size_t k = 0; k < r; ++k) h.a[out.hull.free_coords[k]] = ray.direction[k + 1];
        out.facets.push_back(std::move(h));
        out.incidence.push_back(std::move(ray.tight));
    }
    return out;
}

inline void check_bounds(std::size_t dim, std::size_t count)
{
    if (dim > max_polytope_dim) {
        fail(ErrorKind::DimensionBoundExceeded, "dimension " + std::to_string(dim) + " exceeds " + std::to_string(max_polytope_dim));
    }
    if (count > max_polytope_vertices) {
        fail(ErrorKind::DimensionBoundExceeded, "vertex count " + std::to_string(count) + " exceeds " + std::to_string(max_polytope_vertices));
    }
}

} // namespace detail

inline VPolytope VPolytope::hull(std::size_t dim, std::vector<RVector> points)
{
    for (const auto& p : points) {
        if (p.size() != dim) fail(ErrorKind::DimensionMismatch, "point length differs from polytope dimension");
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() <= 1) return VPolytope(dim, std::move(points));
    detail::check_bounds(dim, points.size());

    const detail::HullFacets hf = detail::hull_facets(points, dim);
    const std::size_t r = hf.hull.free_coords.size();
    std::vector<RVector> extreme;
    for (std::size_t i = 0; i < points.size(); ++i) {
        exact::Matrix tight;
        for (std::size_t f = 0; f < hf.facets.size(); ++f) {
            if (!hf.incidence[f].test(i)) continue;
            RVector row = detail::restrict_to(hf.facets[f].a, hf.hull.free_coords);
            tight.push_back(std::move(row));
        }
        if (exact::rank(tight, r) == r) extreme.push_back(points[i]);
    }
    return VPolytope(dim, std::move(extreme));
}

/// Exact H-representation of conv(v).
inline HPolytope facets(const VPolytope& v)
{
    if (v.empty()) fail(ErrorKind::EmptyInput, "polytope has no vertices");
    detail::check_bounds(v.dim(), v.size());
    const detail::HullFacets hf = detail::hull_facets(v.vertices(), v.dim());
    std::vector<Halfspace> all = hf.facets;
    for (const auto& eq : hf.hull.equalities) {
        all.push_back(eq);
        all.push_back(negated(eq));
    }
    return HPolytope(v.dim(), std::move(all));
}

enum class Membership { Inside, Boundary, Outside };

inline std::string to_string(Membership m)
{
    switch (m) {
    case Membership::Inside: return "INSIDE";
    case Membership::Boundary: return "BOUNDARY";
    case Membership::Outside: return "OUTSIDE";
    }
    return "UNKNOWN";
}

struct ContainsResult {
    Membership verdict;
    std::vector<std::size_t> violated;  // indices into HPolytope::halfspaces()
};

inline ContainsResult contains(const HPolytope& h, const RVector& x)
{
    if (x.size() != h.dim()) fail(ErrorKind::DimensionMismatch, "point length differs from polytope dimension");
    ContainsResult out{Membership::Inside, {}};
    bool tight = false;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const int s = h.halfspaces()[i].slack(x).sign();
        if (s < 0) out.violated.push_back(i);
        if (s == 0) tight = true;
    }
    if (!out.violated.empty()) {
        out.verdict = Membership::Outside;
    } else if (tight) {
        out.verdict = Membership::Boundary;
    }
    return out;
}

/// Either convex weights expressing x over the vertices, or a halfspace that
/// every vertex satisfies and x violates.
struct MembershipCertificate {
    bool member = false;
    RVector weights;                  // aligned with VPolytope::vertices()
    std::optional<Halfspace> separator;
};

/// Membership in conv(v) by exact LP, without facet enumeration. Separating
/// halfspaces are returned as basic solutions of the separation LP, which for
/// full-dimensional polytopes are facets visible from x.
inline MembershipCertificate lp_membership(const VPolytope& v, const RVector& x)
{
    if (x.size() != v.dim()) fail(ErrorKind::DimensionMismatch, "point length differs from polytope dimension");
    if (v.empty()) fail(ErrorKind::EmptyInput, "polytope has no vertices");
    const std::size_t d = v.dim();
    const std::size_t n = v.size();

    exact::Matrix a(d + 1, RVector(n, Rational(0)));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < d; ++k) a[k][j] = v.vertices()[j][k];
        a[d][j] = 1;
    }
    RVector b = x;
    b.push_back(Rational(1));
    ExactSimplex lp(std::move(a), std::move(b));
    MembershipCertificate cert;
    if (lp.find_feasible_basis()) {
        cert.member = true;
        cert.weights = lp.solution();
        return cert;
    }

    // Separation LP over h = (a, a0) split into positive and negative parts:
    //   h(v_i) - s_i = 0, h(x) = -1, s >= 0, minimize sum s.
    const std::size_t free_vars = d + 1;
    const std::size_t cols = 2 * free_vars + n;
    exact::Matrix sep(n + 1, RVector(cols, Rational(0)));
    RVector rhs(n + 1, Rational(0));
    auto put_point = [&](std::size_t row, const RVector& p) {
        for (std::size_t k = 0; k < d; ++k) {
            sep[row][k] = p[k];
            sep[row][free_vars + k] = -p[k];
        }
        sep[row][d] = 1;
        sep[row][free_vars + d] = -1;
    };
    for (std::size_t i = 0; i < n; ++i) {
        put_point(i, v.vertices()[i]);
        sep[i][2 * free_vars + i] = -1;
    }
    put_point(n, x);
    rhs[n] = -1;
    RVector cost(cols, Rational(0));
    for (std::size_t i = 0; i < n; ++i) cost[2 * free_vars + i] = 1;
    ExactSimplex sep_lp(std::move(sep), std::move(rhs));
    if (sep_lp.minimize(cost) != LpStatus::Optimal) {
        // Unreachable by Farkas' lemma; fall back to the phase-one certificate.
        const RVector& z = lp.farkas();
        Halfspace h{RVector(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(d)), z[d]};
        cert.separator = h.normalized();
        return cert;
    }
    const RVector sol = sep_lp.solution();
    Halfspace h{RVector(d), sol[d] - sol[free_vars + d]};
    for (std::size_t k = 0; k < d; ++k) h.a[k] = sol[k] - sol[free_vars + k];
    cert.separator = h.normalized();
    return cert;
}

/// Vertices of {x : h(x) >= 0 for all inequalities, e(x) = 0 for all
/// equalities}. The set must be bounded. Returns an empty list when infeasible.
inline std::vector<RVector> vertices_of(std::size_t dim, const std::vector<Halfspace>& inequalities,
                                        const std::vector<Halfspace>& equalities)
{
    exact::Matrix eq_rows;
    RVector eq_rhs;
    for (const auto& e : equalities) {
        eq_rows.push_back(e.a);
        eq_rhs.push_back(-e.offset);
    }
    std::optional<RVector> base = eq_rows.empty() ? RVector(dim, Rational(0)) : exact::solve_particular(eq_rows, eq_rhs, dim);
    if (!base) return {};
    const exact::Matrix basis = eq_rows.empty() ? [&] {
        exact::Matrix id(dim, RVector(dim, Rational(0)));
        for (std::size_t i = 0; i < dim; ++i) id[i][i] = 1;
        return id;
    }()
                                                : exact::null_space(eq_rows, dim);
    const std::size_t k = basis.size();

    if (k == 0) {
        for (const auto& h : inequalities) {
            if (h.slack(*base).sign() < 0) return {};
        }
        return {*base};
    }

    // Homogenized cone over (t, z) with x = base + N z / t.
    exact::Matrix rows;
    RVector t_row(k + 1, Rational(0));
    t_row[0] = 1;
    rows.push_back(t_row);
    for (const auto& h : inequalities) {
        RVector row(k + 1);
        row[0] = h.slack(*base);
        for (std::size_t j = 0; j < k; ++j) row[j + 1] = dot(h.a, basis[j]);
        rows.push_back(std::move(row));
    }
    if (exact::rank(rows, k + 1) < k + 1) fail(ErrorKind::DimensionMismatch, "halfspace system is unbounded");

    std::vector<RVector> out;
    for (const auto& ray : extreme_rays(rows, k + 1)) {
        const Rational& t = ray.direction[0];
        if (t.sign() == 0) fail(ErrorKind::DimensionMismatch, "halfspace system is unbounded");
        RVector x = *base;
        for (std::size_t j = 0; j < k; ++j) {
            const Rational zj = ray.direction[j + 1] / t;
            if (is_zero(zj)) continue;
            for (std::size_t i = 0; i < dim; ++i) x[i] += zj * basis[j][i];
        }
        out.push_back(std::move(x));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline VPolytope vertices_of(const HPolytope& h)
{
    return VPolytope(h.dim(), vertices_of(h.dim(), h.halfspaces(), {}));
}

/// conv(v) intersected with {x : a . x + a0 = 0 for each equality}.
inline VPolytope slice(const VPolytope& v, const std::vector<Halfspace>& equalities)
{
    if (v.empty()) fail(ErrorKind::EmptyInput, "polytope has no vertices");
    detail::check_bounds(v.dim(), v.size());
    std::vector<Halfspace> eqs;
    for (const auto& e : equalities) {
        if (e.a.size() != v.dim()) fail(ErrorKind::DimensionMismatch, "equality length differs from polytope dimension");
        const bool trivial = std::all_of(e.a.begin(), e.a.end(), [](const Rational& q) { return is_zero(q); });
        if (trivial) {
            if (!is_zero(e.offset)) fail(ErrorKind::EmptySlice, "inconsistent equality 0 = nonzero");
            continue;
        }
        eqs.push_back(e);
    }
    if (eqs.empty()) return v;

    const HPolytope h = facets(v);
    std::vector<RVector> verts = vertices_of(v.dim(), h.halfspaces(), eqs);
    if (verts.empty()) fail(ErrorKind::EmptySlice, "affine subspace misses the polytope");
    return VPolytope(v.dim(), std::move(verts));
}

/// Convex hull of the coordinate projection onto `coords` (in the given order).
inline VPolytope project(const VPolytope& v, const std::vector<std::size_t>& coords)
{
    std::vector<bool> seen(v.dim(), false);
    for (auto c : coords) {
        if (c >= v.dim()) fail(ErrorKind::IndexOutOfRange, "coordinate " + std::to_string(c) + " out of range");
        if (seen[c]) fail(ErrorKind::IndexOutOfRange, "coordinate " + std::to_string(c) + " repeated");
        seen[c] = true;
    }
    std::vector<RVector> points;
    points.reserve(v.size());
    for (const auto& p : v.vertices()) points.push_back(detail::restrict_to(p, coords));
    return VPolytope::hull(coords.size(), std::move(points));
}

/// Image of the LP-feasible region {p >= 0 : A p = b} under y = M p, computed
/// exactly by alternating hull construction and LP confirmation of each facet.
/// Terminates because every added point is an optimal vertex of a linear
/// objective and every confirmed facet is valid for the whole image.
///
/// `symmetries`, if given, must be a group of signed permutation matrices that
/// maps the image onto itself; found points and confirmed facets are then
/// expanded over their orbits instead of being rediscovered by LP.
inline VPolytope linear_image(const exact::Matrix& a, const RVector& b, const exact::Matrix& map,
                              const std::vector<exact::Matrix>& symmetries = {})
{
    const std::size_t k = map.size();
    if (k == 0) fail(ErrorKind::EmptyInput, "empty linear map");
    const std::size_t n = map.front().size();
    detail::check_bounds(k, 0);
    ExactSimplex lp(a, b);
    if (!lp.find_feasible_basis()) fail(ErrorKind::EmptyInput, "LP region is empty");

    auto image = [&](const RVector& p) {
        RVector y(k, Rational(0));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!is_zero(p[j]) && !is_zero(map[i][j])) y[i] += map[i][j] * p[j];
            }
        }
        return y;
    };

    auto apply = [k](const exact::Matrix& g, const RVector& y) {
        RVector out(k, Rational(0));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                if (!is_zero(g[i][j])) out[i] += g[i][j] * y[j];
            }
        }
        return out;
    };
    std::vector<RVector> points;
    auto add_orbit = [&](const RVector& y) {
        points.push_back(y);
        for (const auto& g : symmetries) points.push_back(apply(g, y));
    };
    std::set<Halfspace> confirmed;
    auto confirm_orbit = [&](const Halfspace& f) {
        confirmed.insert(f);
        for (const auto& g : symmetries) confirmed.insert(Halfspace{apply(g, f.a), f.offset}.normalized());
    };

    add_orbit(image(lp.solution()));
    for (;;) {
        const VPolytope current(k, points);
        const HPolytope h = facets(current);
        bool grew = false;
        for (const auto& f : h.halfspaces()) {
            if (confirmed.count(f)) continue;
            RVector cost(n, Rational(0));
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t i = 0; i < k; ++i) {
                    if (!is_zero(f.a[i]) && !is_zero(map[i][j])) cost[j] += f.a[i] * map[i][j];
                }
            }
            if (lp.minimize(cost) != LpStatus::Optimal) fail(ErrorKind::EmptyInput, "LP region is unbounded");
            RVector y = image(lp.solution());
            if (f.slack(y).sign() < 0) {
                add_orbit(y);
                grew = true;
            } else {
                confirm_orbit(f);
            }
        }
        if (!grew) return VPolytope::hull(k, std::move(points));
        points = VPolytope::hull(k, std::move(points)).vertices();
    }
}

} // namespace corrgeo

#endif
