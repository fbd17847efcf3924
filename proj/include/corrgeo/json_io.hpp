#ifndef CORRGEO_JSON_IO_HPP
#define CORRGEO_JSON_IO_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrgeo/error.hpp"
#include "corrgeo/events.hpp"
#include "corrgeo/polytope.hpp"
#include "corrgeo/quantum.hpp"
#include "corrgeo/raffles.hpp"
#include "corrgeo/rational.hpp"

namespace corrgeo::io {

using json = nlohmann::json;

// Integer style writes "3"; it is only used where every value is integral
// (0/1 event vectors and their primitive facets).
enum class RationalStyle { Fraction, Integer };

inline json rational_to_json(const Rational& q, RationalStyle style = RationalStyle::Fraction)
{
    return style == RationalStyle::Integer ? to_compact_string(q) : to_fraction_string(q);
}

/// Accepts "p/q", "p", decimal strings and JSON integers.
inline Rational rational_from_json(const json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(Integer(j.dump()));
    if (j.is_number_float()) fail(ErrorKind::ParseError, "non-integer rationals must be strings such as \"1/3\" (got " + j.dump() + ")");
    fail(ErrorKind::ParseError, "expected a rational, got " + j.dump());
}

inline json vector_to_json(const RVector& v, RationalStyle style = RationalStyle::Fraction)
{
    json out = json::array();
    for (const auto& q : v) out.push_back(rational_to_json(q, style));
    return out;
}

inline RVector vector_from_json(const json& j)
{
    if (!j.is_array()) fail(ErrorKind::ParseError, "expected an array of rationals");
    RVector out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(rational_from_json(e));
    return out;
}

inline const json& require(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) fail(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline std::size_t size_from_json(const json& j, const char* what)
{
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(ErrorKind::ParseError, std::string(what) + " must be a nonnegative integer");
    return j.get<std::size_t>();
}

// ---------------------------------------------------------------------------
// Event systems

inline json expr_to_json(const LogicalExpr& e)
{
    using Op = LogicalExpr::Op;
    if (e.op() == Op::Atom) return e.atom_index();
    json out = json::array({e.op() == Op::And ? "and" : e.op() == Op::Or ? "or" : "not"});
    for (const auto& c : e.children()) out.push_back(expr_to_json(c));
    return out;
}

inline LogicalExpr expr_from_json(const json& j)
{
    if (j.is_number_integer()) return LogicalExpr::atom(size_from_json(j, "atom index"));
    if (!j.is_array() || j.empty() || !j.front().is_string()) {
        fail(ErrorKind::InvalidExpression, "expression must be an atom index or [\"and\"|\"or\"|\"not\", ...]: " + j.dump());
    }
    const std::string op = j.front().get<std::string>();
    std::vector<LogicalExpr> children;
    for (std::size_t i = 1; i < j.size(); ++i) children.push_back(expr_from_json(j[i]));
    if (op == "and") return LogicalExpr::conjunction(std::move(children));
    if (op == "or") return LogicalExpr::disjunction(std::move(children));
    if (op == "not") {
        if (children.size() != 1) fail(ErrorKind::InvalidExpression, "NOT takes exactly one operand");
        return LogicalExpr::negation(std::move(children.front()));
    }
    fail(ErrorKind::InvalidExpression, "unknown operator \"" + op + "\"");
}

inline json to_json(const EventSystem& sys)
{
    json derived = json::array();
    for (const auto& e : sys.derived()) derived.push_back(expr_to_json(e));
    return {{"atoms", sys.atom_count()}, {"derived", derived}};
}

inline EventSystem event_system_from_json(const json& j)
{
    const std::size_t atoms = size_from_json(require(j, "atoms"), "atoms");
    std::vector<LogicalExpr> derived;
    if (j.contains("derived")) {
        if (!j.at("derived").is_array()) fail(ErrorKind::ParseError, "\"derived\" must be an array");
        for (const auto& e : j.at("derived")) derived.push_back(expr_from_json(e));
    }
    return EventSystem(atoms, std::move(derived));
}

// ---------------------------------------------------------------------------
// Polytopes

inline json to_json(const VPolytope& v, RationalStyle style = RationalStyle::Fraction)
{
    json verts = json::array();
    for (const auto& p : v.vertices()) verts.push_back(vector_to_json(p, style));
    return {{"dim", v.dim()}, {"vertices", verts}};
}

inline json halfspace_to_json(const Halfspace& h, RationalStyle style = RationalStyle::Fraction)
{
    return {{"a", vector_to_json(h.a, style)}, {"a0", rational_to_json(h.offset, style)}};
}

inline json to_json(const HPolytope& h, RationalStyle style = RationalStyle::Fraction)
{
    json hs = json::array();
    for (const auto& f : h.halfspaces()) hs.push_back(halfspace_to_json(f, style));
    return {{"dim", h.dim()}, {"halfspaces", hs}};
}

inline Halfspace halfspace_from_json(const json& j, std::size_t dim)
{
    Halfspace h{vector_from_json(require(j, "a")), rational_from_json(require(j, "a0"))};
    if (h.a.size() != dim) fail(ErrorKind::DimensionMismatch, "halfspace has " + std::to_string(h.a.size()) + " coefficients, expected " + std::to_string(dim));
    return h;
}

inline VPolytope vpolytope_from_json(const json& j)
{
    const std::size_t dim = size_from_json(require(j, "dim"), "dim");
    const json& verts = require(j, "vertices");
    if (!verts.is_array()) fail(ErrorKind::ParseError, "\"vertices\" must be an array");
    std::vector<RVector> points;
    for (const auto& v : verts) {
        points.push_back(vector_from_json(v));
        if (points.back().size() != dim) fail(ErrorKind::DimensionMismatch, "vertex length differs from dim");
    }
    return VPolytope(dim, std::move(points));
}

inline HPolytope hpolytope_from_json(const json& j)
{
    const std::size_t dim = size_from_json(require(j, "dim"), "dim");
    const json& hs = require(j, "halfspaces");
    if (!hs.is_array()) fail(ErrorKind::ParseError, "\"halfspaces\" must be an array");
    std::vector<Halfspace> out;
    for (const auto& h : hs) out.push_back(halfspace_from_json(h, dim));
    return HPolytope(dim, std::move(out));
}

// ---------------------------------------------------------------------------
// Raffles and simulation reports

/// Ticket values are plain JSON numbers (0.5, -1, ...), all exactly representable.
inline json to_json(const Raffle& r)
{
    json tickets = json::array();
    for (const auto& [t, p] : r.tickets()) {
        json x = json::array();
        for (int m2 : t) {
            if (m2 % 2 == 0) x.push_back(m2 / 2);
            else x.push_back(m2 / 2.0);
        }
        tickets.push_back({{"x", x}, {"p", to_fraction_string(p)}});
    }
    return {{"spin2", r.value_set().spin2()}, {"tickets", tickets}};
}

inline int doubled_value_from_json(const json& j)
{
    Rational m;
    if (j.is_number_float()) {
        m = rational_from_double(j.get<double>());
    } else {
        m = rational_from_json(j);
    }
    const Rational doubled = 2 * m;
    if (denominator_of(doubled) != 1 || abs(doubled) > 1000) fail(ErrorKind::ValueNotInSet, "ticket value " + j.dump() + " is not a half-integer spin value");
    return numerator_of(doubled).convert_to<int>();
}

inline Raffle raffle_from_json(const json& j)
{
    const json& s = require(j, "spin2");
    if (!s.is_number_integer()) fail(ErrorKind::ParseError, "\"spin2\" must be an integer");
    const int spin2 = s.get<int>();
    const json& tickets = require(j, "tickets");
    if (!tickets.is_array()) fail(ErrorKind::ParseError, "\"tickets\" must be an array");
    std::map<Ticket, Rational> mix;
    for (const auto& e : tickets) {
        const json& x = require(e, "x");
        if (!x.is_array() || x.size() != 3) fail(ErrorKind::ParseError, "ticket \"x\" must list three values");
        const Ticket t{doubled_value_from_json(x[0]), doubled_value_from_json(x[1]), doubled_value_from_json(x[2])};
        mix[t] += rational_from_json(require(e, "p"));
    }
    return Raffle(spin2, std::move(mix));
}

inline json to_json(const SimulationReport& r, const BalancedValueSet& vs)
{
    json values = json::array();
    for (int m2 : vs.doubled_values()) {
        if (m2 % 2 == 0) values.push_back(m2 / 2);
        else values.push_back(m2 / 2.0);
    }
    json marginals = json::object();
    static constexpr const char* parties[] = {"party1", "party2"};
    for (std::size_t p = 0; p < 2; ++p) {
        json per_setting = json::object();
        for (std::size_t s = 0; s < 3; ++s) per_setting[setting_name(s)] = r.histogram[p][s];
        marginals[parties[p]] = per_setting;
    }
    return {{"seed", r.seed},
            {"n_draws", r.n_draws},
            {"shards", r.shards},
            {"generator", r.generator},
            {"chi", {r.chi.chi_ab, r.chi.chi_ac, r.chi.chi_bc}},
            {"sigma2", r.sigma2},
            {"pair_draws", r.pair_draws},
            {"values", values},
            {"marginals", marginals}};
}

// ---------------------------------------------------------------------------
// Complex matrices as nested [re, im] pairs

inline json to_json(const CMatrix& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline CMatrix cmatrix_from_json(const json& j)
{
    if (!j.is_array() || j.empty() || !j.front().is_array()) fail(ErrorKind::ParseError, "complex matrix must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail(ErrorKind::DimensionMismatch, "ragged complex matrix");
        for (Eigen::Index k = 0; k < cols; ++k) {
            const json& z = row[static_cast<std::size_t>(k)];
            if (z.is_number()) {
                m(i, k) = Complex(z.get<double>(), 0.0);
            } else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number()) {
                m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
            } else {
                fail(ErrorKind::ParseError, "complex entry must be [re, im]: " + z.dump());
            }
        }
    }
    return m;
}

} // namespace corrgeo::io

#endif
