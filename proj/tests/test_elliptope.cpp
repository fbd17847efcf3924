#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "corrgeo/elliptope.hpp"
#include "oracles.hpp"

using namespace corrgeo;
using Catch::Matchers::WithinAbs;

TEST_CASE("elliptope value at reference points")
{
    CHECK(elliptope_value({0, 0, 0}) == 1.0);
    CHECK(elliptope_value({1, 1, 1}) == 0.0);
    CHECK(elliptope_value({-0.5, -0.5, -0.5}) == 0.0);
    CHECK(elliptope_value({1, 1, -1}) == -4.0);
}

TEST_CASE("elliptope value equals the correlation determinant")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const CorrelationTriple t{u(rng), u(rng), u(rng)};
        CHECK_THAT(elliptope_value(t), WithinAbs(oracle::correlation_det(t), 1e-14));
    }
}

TEST_CASE("membership verdicts")
{
    CHECK(is_in_elliptope({0.5, 0.5, 0.5}) == ElliptopeVerdict::Inside);
    CHECK(elliptope_value({0.5, 0.5, 0.5}) == 0.5);
    CHECK(is_in_elliptope({1, 1, -1}) == ElliptopeVerdict::Outside);
    CHECK(is_in_elliptope({1, 1, 1}) == ElliptopeVerdict::Boundary);
    CHECK(is_in_elliptope({-0.5, -0.5, -0.5}) == ElliptopeVerdict::Boundary);
    CHECK(is_in_elliptope({1.5, 0, 0}) == ElliptopeVerdict::Outside);
    CHECK(is_in_elliptope({1, 0, 0}) == ElliptopeVerdict::Boundary);
    CHECK(to_string(ElliptopeVerdict::Boundary) == "BOUNDARY");
}

TEST_CASE("membership agrees with the eigenvalue oracle")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const CorrelationTriple t{u(rng), u(rng), u(rng)};
        const double lambda = oracle::correlation_min_eigenvalue(t);
        if (std::abs(lambda) <= 1e-10) continue;
        CHECK((is_in_elliptope(t) != ElliptopeVerdict::Outside) == (lambda >= -1e-10));
    }
}

TEST_CASE("Gram vectors reproduce the triple")
{
    SECTION("origin gives an orthonormal basis")
    {
        const auto g = gram_vectors({0, 0, 0});
        CHECK(g.a == Vec3{1, 0, 0});
        CHECK(g.b == Vec3{0, 1, 0});
        CHECK(g.c == Vec3{0, 0, 1});
    }
    SECTION("all ones gives coincident vectors")
    {
        const auto g = gram_vectors({1, 1, 1});
        CHECK(g.a == g.b);
        CHECK(g.b == g.c);
    }
    SECTION("Mermin point gives coplanar vectors at 120 degrees")
    {
        const auto g = gram_vectors({-0.5, -0.5, -0.5});
        CHECK(g.residual({-0.5, -0.5, -0.5}) < 1e-12);
        CHECK_THAT(g.a[2], WithinAbs(0.0, 1e-12));
        CHECK_THAT(g.b[2], WithinAbs(0.0, 1e-12));
        CHECK_THAT(g.c[2], WithinAbs(0.0, 1e-12));
        CHECK_THAT(g.quadratic_form({1, 1, 1}), WithinAbs(0.0, 1e-12));
    }
    SECTION("random interior and boundary points")
    {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 2000; ++i) {
            const CorrelationTriple t = oracle::random_elliptope_point(rng);
            const auto g = gram_vectors(t);
            CHECK(g.residual(t) < 1e-12);
            for (const auto& v : {g.a, g.b, g.c}) CHECK_THAT(dot3(v, v), WithinAbs(1.0, 1e-12));
        }
        for (const auto& t : boundary_mesh(21)) CHECK(gram_vectors(t).residual(t) < 1e-7);
    }
    SECTION("outside points are rejected")
    {
        try {
            gram_vectors({1, 1, -1});
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotInElliptope);
        }
    }
}

TEST_CASE("quadratic form of the correlation matrix is nonnegative")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const auto g = gram_vectors(oracle::random_elliptope_point(rng));
        CHECK(g.quadratic_form({u(rng), u(rng), u(rng)}) >= 0.0);
    }
}

TEST_CASE("boundary mesh")
{
    const auto mesh = boundary_mesh(64);
    CHECK(mesh.size() > 64 * 64);
    for (const auto& t : mesh) {
        CHECK(std::abs(elliptope_value(t)) < 1e-12);
        CHECK(is_in_elliptope(t) == ElliptopeVerdict::Boundary);
    }
    SECTION("grid point (0,0) has roots +-1")
    {
        const auto m = boundary_mesh(5);  // grid -1, -1/2, 0, 1/2, 1
        std::vector<double> roots;
        for (const auto& t : m) {
            if (t.chi_ab == 0.0 && t.chi_ac == 0.0) roots.push_back(t.chi_bc);
        }
        CHECK(roots == std::vector<double>{-1.0, 1.0});
    }
    SECTION("grid point (1/2,1/2) has roots -1/2 and 1")
    {
        std::vector<double> roots;
        for (const auto& t : boundary_mesh(5)) {
            if (t.chi_ab == 0.5 && t.chi_ac == 0.5) roots.push_back(t.chi_bc);
        }
        REQUIRE(roots.size() == 2);
        CHECK_THAT(roots[0], WithinAbs(-0.5, 1e-15));
        CHECK_THAT(roots[1], WithinAbs(1.0, 1e-15));
    }
    SECTION("grid point (1, x) has the single root x")
    {
        for (const auto& t : boundary_mesh(5)) {
            if (t.chi_ab == 1.0) CHECK(t.chi_bc == t.chi_ac);
        }
    }
    CHECK_THROWS_AS(boundary_mesh(1), Error);
}
