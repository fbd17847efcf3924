#include <catch_amalgamated.hpp>

#include "corrgeo/json_io.hpp"
#include "test_shapes.hpp"

using namespace corrgeo;
using namespace corrgeo::io;

namespace {

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::ParseError;
}

} // namespace

TEST_CASE("rationals")
{
    CHECK(rational_to_json(Rational(1, 3)) == json("1/3"));
    CHECK(rational_to_json(Rational(-2)) == json("-2/1"));
    CHECK(rational_to_json(Rational(-2), RationalStyle::Integer) == json("-2"));
    CHECK(rational_from_json(json("-4/6")) == Rational(-2, 3));
    CHECK(rational_from_json(json(7)) == 7);
    CHECK(rational_from_json(json("0.25")) == Rational(1, 4));
    CHECK(rational_from_json(json("010")) == 10);
    CHECK(rational_from_json(json("-007/012")) == Rational(-7, 12));
    CHECK(rational_from_json(json("0.0")) == 0);
    CHECK(kind_of([] { rational_from_json(json(0.5)); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { rational_from_json(json::object()); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { rational_from_json(json("1/0")); }) == ErrorKind::ParseError);
}

TEST_CASE("event systems round trip")
{
    const EventSystem chsh = chsh_event_system();
    const json j = to_json(chsh);
    CHECK(j.at("atoms") == 4);
    CHECK(j.at("derived").size() == 4);
    const EventSystem back = event_system_from_json(j);
    CHECK(back.atom_count() == chsh.atom_count());
    CHECK(back.derived() == chsh.derived());

    const json nested = json::parse(R"({"atoms": 3, "derived": [["or", ["not", 0], ["and", 1, 2]]]})");
    const EventSystem sys = event_system_from_json(nested);
    CHECK(to_json(sys) == nested);
    CHECK(sys.extend({false, true, true}) == std::vector<int>{0, 1, 1, 1});

    CHECK(kind_of([] { event_system_from_json(json::parse(R"({"atoms": 2, "derived": [["xor", 0, 1]]})")); }) == ErrorKind::InvalidExpression);
    CHECK(kind_of([] { event_system_from_json(json::parse(R"({"atoms": 2, "derived": [["not", 0, 1]]})")); }) == ErrorKind::InvalidExpression);
    CHECK(kind_of([] { event_system_from_json(json::parse(R"({"atoms": 2, "derived": [["and", 0, 5]]})")); }) == ErrorKind::InvalidExpression);
    CHECK(kind_of([] { event_system_from_json(json::parse(R"({"derived": []})")); }) == ErrorKind::ParseError);
}

TEST_CASE("polytopes round trip")
{
    for (const auto& [name, v] : shapes::test_polytopes()) {
        INFO(name);
        CHECK(vpolytope_from_json(to_json(v)) == v);
        const HPolytope h = facets(v);
        CHECK(hpolytope_from_json(to_json(h)) == h);
        CHECK(hpolytope_from_json(json::parse(to_json(h).dump())) == h);
    }
    CHECK(kind_of([] { vpolytope_from_json(json::parse(R"({"dim": 2, "vertices": [["0", "1", "2"]]})")); }) == ErrorKind::DimensionMismatch);
    CHECK(kind_of([] { vpolytope_from_json(json::parse(R"({"dim": 2, "vertices": "none"})")); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { hpolytope_from_json(json::parse(R"({"dim": 2, "halfspaces": [{"a": ["1", "0", "0"], "a0": "0"}]})")); }) == ErrorKind::DimensionMismatch);
    CHECK(kind_of([] { vpolytope_from_json(json::parse(R"({"dim": -1, "vertices": []})")); }) == ErrorKind::ParseError);
}

TEST_CASE("raffles round trip")
{
    const Raffle r(3, {{{3, 1, -1}, Rational(1, 4)}, {{-3, -1, 1}, Rational(1, 4)}, {{1, -3, 3}, Rational(1, 2)}});
    const json j = to_json(r);
    CHECK(j.at("tickets")[0].at("x") == json::parse("[-1.5, -0.5, 0.5]"));
    CHECK(j.at("tickets")[0].at("p") == "1/4");
    CHECK(raffle_from_json(j) == r);
    CHECK(raffle_from_json(json::parse(j.dump())) == r);

    const json text = json::parse(R"({"spin2": 2, "tickets": [{"x": ["1", "0", "-1"], "p": "1/2"}, {"x": [1, 0, -1], "p": "1/2"}]})");
    CHECK(raffle_from_json(text) == Raffle(2, {{{2, 0, -2}, Rational(1)}}));

    CHECK(kind_of([] { raffle_from_json(json::parse(R"({"spin2": 1, "tickets": [{"x": [1, 0.5, 0.5], "p": "1"}]})")); }) == ErrorKind::ValueNotInSet);
    CHECK(kind_of([] { raffle_from_json(json::parse(R"({"spin2": 1, "tickets": [{"x": [0.25, 0.5, 0.5], "p": "1"}]})")); }) == ErrorKind::ValueNotInSet);
    CHECK(kind_of([] { raffle_from_json(json::parse(R"({"spin2": 1, "tickets": [{"x": [0.5, 0.5, 0.5], "p": "1/2"}]})")); }) == ErrorKind::BadDistribution);
    CHECK(kind_of([] { raffle_from_json(json::parse(R"({"spin2": 1, "tickets": [{"x": [0.5, 0.5], "p": "1"}]})")); }) == ErrorKind::ParseError);
}

TEST_CASE("simulation report")
{
    const Raffle r(1, {{{1, 1, 1}, Rational(1, 2)}, {{-1, -1, -1}, Rational(1, 2)}});
    const auto rep = simulate(r, 1000, 9);
    const json j = to_json(rep, r.value_set());
    CHECK(j.at("seed") == 9);
    CHECK(j.at("n_draws") == 1000);
    CHECK(j.at("chi") == json::parse("[1.0, 1.0, 1.0]"));
    CHECK(j.at("values") == json::parse("[0.5, -0.5]"));
    CHECK(j.at("generator") == "splitmix64-counter/v1");
    for (const char* party : {"party1", "party2"}) {
        std::uint64_t total = 0;
        for (const char* setting : {"a", "b", "c"}) {
            for (const auto& n : j.at("marginals").at(party).at(setting)) total += n.get<std::uint64_t>();
        }
        CHECK(total == 1000);
    }
}

TEST_CASE("complex matrices round trip")
{
    const CMatrix s = spin_ops(2).sy;
    CHECK(cmatrix_from_json(to_json(s)) == s);
    CHECK(cmatrix_from_json(json::parse("[[1, [0, 1]], [[0, -1], 2]]"))(0, 1) == Complex(0, 1));
    CHECK(kind_of([] { cmatrix_from_json(json::parse("[[1, 2], [3]]")); }) == ErrorKind::DimensionMismatch);
    CHECK(kind_of([] { cmatrix_from_json(json::parse("[[\"x\"]]")); }) == ErrorKind::ParseError);
}
