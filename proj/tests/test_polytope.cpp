#include <catch_amalgamated.hpp>

#include <random>

#include "corrgeo/polytope.hpp"
#include "oracles.hpp"
#include "test_shapes.hpp"

using namespace corrgeo;

namespace {

Halfspace hs(std::initializer_list<int> a, int a0)
{
    Halfspace h{RVector(), Rational(a0)};
    for (int c : a) h.a.emplace_back(c);
    return h;
}

RVector pt(std::initializer_list<Rational> xs) { return RVector(xs); }

} // namespace

TEST_CASE("unit square facets")
{
    const VPolytope sq(2, {pt({0, 0}), pt({0, 1}), pt({1, 0}), pt({1, 1})});
    const HPolytope h = facets(sq);
    CHECK(h.size() == 4);
    CHECK(h.has(hs({1, 0}, 0)));
    CHECK(h.has(hs({0, 1}, 0)));
    CHECK(h.has(hs({-1, 0}, 1)));
    CHECK(h.has(hs({0, -1}, 1)));
}

TEST_CASE("tetrahedron facets")
{
    const HPolytope h = facets(shapes::tetrahedron());
    const std::vector<Halfspace> want{hs({-1, -1, 1}, 1), hs({-1, 1, -1}, 1), hs({1, -1, -1}, 1), hs({1, 1, 1}, 1)};
    CHECK(h.halfspaces() == want);
    const auto brute = oracle::brute_force_facets(shapes::tetrahedron().vertices(), 3);
    CHECK(std::set<Halfspace>(want.begin(), want.end()) == brute);
}

TEST_CASE("standard simplex has three facets and an equality pair")
{
    const VPolytope s(3, {pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})});
    const HPolytope h = facets(s);
    CHECK(h.proper_facets().size() == 3);
    CHECK(h.size() == 5);
    CHECK(h.is_equality(hs({1, 1, 1}, -1)));
    CHECK(h.has(hs({1, 0, 0}, 0)));
}

TEST_CASE("facets of degenerate inputs")
{
    SECTION("single point")
    {
        const HPolytope h = facets(VPolytope(2, {pt({Rational(1, 2), 3})}));
        CHECK(h.proper_facets().empty());
        CHECK(h.size() == 4);
        CHECK(contains(h, pt({Rational(1, 2), 3})).verdict != Membership::Outside);
        CHECK(contains(h, pt({0, 3})).verdict == Membership::Outside);
    }
    SECTION("segment in the plane")
    {
        const HPolytope h = facets(VPolytope(2, {pt({0, 0}), pt({2, 2})}));
        CHECK(h.proper_facets().size() == 2);
        CHECK(h.is_equality(hs({1, -1}, 0)));
    }
    SECTION("empty input")
    {
        CHECK_THROWS_AS(facets(VPolytope(2, {})), Error);
    }
    SECTION("dimension bound")
    {
        try {
            facets(VPolytope(11, {RVector(11, Rational(0))}));
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DimensionBoundExceeded);
        }
    }
}

TEST_CASE("facets agree with brute force on random polytopes")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
        std::vector<RVector> points;
        for (int i = 0; i < 9; ++i) {
            RVector p;
            for (std::size_t k = 0; k < d; ++k) p.push_back(oracle::random_rational(rng, -2, 2, 3));
            points.push_back(p);
        }
        const VPolytope v = VPolytope::hull(d, points);
        if (exact::rank([&] {
                exact::Matrix m;
                for (const auto& p : v.vertices()) {
                    RVector r = p;
                    r.push_back(1);
                    m.push_back(r);
                }
                return m;
            }(), d + 1) < d + 1) {
            continue;
        }
        const HPolytope h = facets(v);
        const auto brute = oracle::brute_force_facets(v.vertices(), d);
        CHECK(std::set<Halfspace>(h.halfspaces().begin(), h.halfspaces().end()) == brute);
    }
}

TEST_CASE("V to H to V round trip")
{
    for (const auto& [name, v] : shapes::test_polytopes()) {
        INFO(name);
        const HPolytope h = facets(v);
        CHECK(vertices_of(h) == v);
        const HPolytope again = facets(vertices_of(h));
        CHECK(again == h);
    }
}

TEST_CASE("contains on the tetrahedron")
{
    const HPolytope h = facets(shapes::tetrahedron());
    CHECK(contains(h, pt({0, 0, 0})).verdict == Membership::Inside);
    const auto mermin = contains(h, pt({Rational(-1, 2), Rational(-1, 2), Rational(-1, 2)}));
    CHECK(mermin.verdict == Membership::Outside);
    REQUIRE(mermin.violated.size() == 1);
    CHECK(h.halfspaces()[mermin.violated.front()] == hs({1, 1, 1}, 1));
    CHECK(contains(h, pt({1, 1, 1})).verdict == Membership::Boundary);
    CHECK_THROWS_AS(contains(h, pt({0, 0})), Error);
}

TEST_CASE("lp_membership certificates on the tetrahedron")
{
    const VPolytope t = shapes::tetrahedron();
    SECTION("centroid")
    {
        const auto c = lp_membership(t, pt({0, 0, 0}));
        CHECK(c.member);
        CHECK(c.weights == RVector(4, Rational(1, 4)));
    }
    SECTION("Mermin point")
    {
        const auto c = lp_membership(t, pt({Rational(-1, 2), Rational(-1, 2), Rational(-1, 2)}));
        CHECK_FALSE(c.member);
        REQUIRE(c.separator);
        CHECK(*c.separator == hs({1, 1, 1}, 1));
    }
    SECTION("edge midpoint")
    {
        const auto c = lp_membership(t, pt({1, 0, 0}));
        CHECK(c.member);
        // vertices are sorted: (-1,-1,1), (-1,1,-1), (1,-1,-1), (1,1,1)
        CHECK(c.weights == RVector{0, 0, Rational(1, 2), Rational(1, 2)});
    }
}

TEST_CASE("lp_membership certificates are valid")
{
    std::mt19937_64 rng(11);
    for (const auto& [name, v] : shapes::test_polytopes()) {
        INFO(name);
        for (int i = 0; i < 40; ++i) {
            RVector x;
            for (std::size_t k = 0; k < v.dim(); ++k) x.push_back(oracle::random_rational(rng, -1, 1, 4));
            const auto c = lp_membership(v, x);
            if (c.member) {
                RVector sum(v.dim(), Rational(0));
                Rational total = 0;
                for (std::size_t j = 0; j < v.size(); ++j) {
                    CHECK(c.weights[j] >= 0);
                    total += c.weights[j];
                    for (std::size_t k = 0; k < v.dim(); ++k) sum[k] += c.weights[j] * v.vertices()[j][k];
                }
                CHECK(total == 1);
                CHECK(sum == x);
            } else {
                REQUIRE(c.separator);
                CHECK(c.separator->slack(x) < 0);
                for (const auto& p : v.vertices()) CHECK(c.separator->slack(p) >= 0);
            }
        }
    }
}

TEST_CASE("contains and lp_membership agree on random points")
{
    std::mt19937_64 rng(3);
    for (const auto& [name, v] : shapes::test_polytopes()) {
        INFO(name);
        const HPolytope h = facets(v);
        for (int i = 0; i < 200; ++i) {
            const RVector x = shapes::random_probe(rng, v);
            CHECK((contains(h, x).verdict != Membership::Outside) == lp_membership(v, x).member);
        }
    }
}

TEST_CASE("vertices_of with equalities")
{
    // [0,1]^2 with x = y
    const std::vector<Halfspace> box{hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, 0}, 1), hs({0, -1}, 1)};
    const auto v = vertices_of(2, box, {hs({1, -1}, 0)});
    CHECK(v == std::vector<RVector>{pt({0, 0}), pt({1, 1})});
    CHECK(vertices_of(2, box, {hs({1, 0}, -2)}).empty());
    CHECK_THROWS_AS(vertices_of(2, {hs({1, 0}, 0)}, {}), Error);
}

TEST_CASE("slices")
{
    SECTION("cube at z = 1/2")
    {
        const VPolytope s = slice(shapes::unit_cube(), {Halfspace{pt({0, 0, 1}), Rational(-1, 2)}});
        const std::vector<RVector> want{pt({0, 0, Rational(1, 2)}), pt({0, 1, Rational(1, 2)}), pt({1, 0, Rational(1, 2)}),
                                        pt({1, 1, Rational(1, 2)})};
        CHECK(s.vertices() == want);
    }
    SECTION("tetrahedron at chi_bc = 1")
    {
        const VPolytope s = slice(shapes::tetrahedron(), {hs({0, 0, 1}, -1)});
        CHECK(s.vertices() == std::vector<RVector>{pt({-1, -1, 1}), pt({1, 1, 1})});
    }
    SECTION("tautology")
    {
        CHECK(slice(shapes::tetrahedron(), {hs({0, 0, 0}, 0)}) == shapes::tetrahedron());
    }
    SECTION("empty and inconsistent")
    {
        try {
            slice(shapes::tetrahedron(), {hs({1, 0, 0}, -2)});
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::EmptySlice);
        }
        CHECK_THROWS_AS(slice(shapes::tetrahedron(), {hs({0, 0, 0}, 1)}), Error);
    }
}

TEST_CASE("projections")
{
    CHECK(project(shapes::unit_cube(), {0, 1}) == VPolytope(2, {pt({0, 0}), pt({0, 1}), pt({1, 0}), pt({1, 1})}));
    CHECK(project(VPolytope(3, {pt({1, 2, 3})}), {2, 0}) == VPolytope(2, {pt({3, 1})}));
    CHECK(project(shapes::tetrahedron(), {0}) == VPolytope(1, {pt({-1}), pt({1})}));
    try {
        project(shapes::unit_cube(), {0, 3});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IndexOutOfRange);
    }
    CHECK_THROWS_AS(project(shapes::unit_cube(), {1, 1}), Error);
}

TEST_CASE("project of slice matches a Fourier-Motzkin lift")
{
    // Cross-polytope in 4D cut by x0 + x1 + x2 + x3 = 1/2, shadow on (x0, x1).
    std::vector<RVector> verts;
    for (std::size_t k = 0; k < 4; ++k) {
        for (int s : {-1, 1}) {
            RVector p(4, Rational(0));
            p[k] = s;
            verts.push_back(p);
        }
    }
    const VPolytope cross(4, verts);
    const Halfspace cut{pt({1, 1, 1, 1}), Rational(-1, 2)};
    const VPolytope shadow = project(slice(cross, {cut}), {0, 1});

    // Oracle: facets of the cross-polytope by brute force, plus the cut as an
    // equality, then eliminate x2 and x3.
    std::vector<oracle::Row> rows;
    for (const auto& f : oracle::brute_force_facets(verts, 4)) rows.push_back({f.a, f.offset, false});
    rows.push_back({cut.a, cut.offset, true});
    const auto fm = oracle::fourier_motzkin(rows, {2, 3});
    std::vector<Halfspace> lifted;
    for (const auto& r : fm) {
        REQUIRE_FALSE(r.eq);
        lifted.push_back(Halfspace{RVector(r.a.begin(), r.a.begin() + 2), r.a0});
    }
    // The shadow's vertices satisfy the oracle system and its facets are among the oracle's.
    for (const auto& p : shadow.vertices()) {
        for (const auto& f : lifted) CHECK(f.slack(p) >= 0);
    }
    std::set<Halfspace> fm_set;
    for (const auto& f : lifted) fm_set.insert(f.normalized());
    const HPolytope shadow_facets = facets(shadow);
    for (const auto& f : shadow_facets.halfspaces()) CHECK(fm_set.count(f) == 1);
}

TEST_CASE("linear image of an LP region")
{
    // p >= 0 on three coordinates summing to 1, mapped by identity on the first two.
    const exact::Matrix a{RVector{1, 1, 1}};
    const exact::Matrix map{RVector{1, 0, 0}, RVector{0, 1, 0}};
    const VPolytope img = linear_image(a, RVector{1}, map);
    CHECK(img == VPolytope(2, {pt({0, 0}), pt({0, 1}), pt({1, 0})}));
    CHECK_THROWS_AS(linear_image(a, RVector{-1}, map), Error);
}

TEST_CASE("hull drops interior and duplicate points")
{
    const VPolytope v = VPolytope::hull(2, {pt({0, 0}), pt({2, 0}), pt({0, 2}), pt({1, 0}), pt({Rational(1, 2), Rational(1, 2)}), pt({0, 0})});
    CHECK(v == VPolytope(2, {pt({0, 0}), pt({0, 2}), pt({2, 0})}));
}
