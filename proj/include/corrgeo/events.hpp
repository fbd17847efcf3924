#ifndef CORRGEO_EVENTS_HPP
#define CORRGEO_EVENTS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "corrgeo/error.hpp"
#include "corrgeo/polytope.hpp"

namespace corrgeo {

inline constexpr std::size_t max_event_atoms = 24;
inline constexpr std::size_t max_boole_dim = 10;

/// Boolean expression over atomic events, referenced by 0-based index.
class LogicalExpr {
public:
    enum class Op { Atom, And, Or, Not };

    static LogicalExpr atom(std::size_t index) { return LogicalExpr(Op::Atom, index, {}); }
    static LogicalExpr negation(LogicalExpr child) { return LogicalExpr(Op::Not, 0, {std::move(child)}); }
    static LogicalExpr conjunction(std::vector<LogicalExpr> children)
    {
        return LogicalExpr(Op::And, 0, std::move(children));
    }
    static LogicalExpr disjunction(std::vector<LogicalExpr> children)
    {
        return LogicalExpr(Op::Or, 0, std::move(children));
    }

    Op op() const noexcept { return op_; }
    std::size_t atom_index() const noexcept { return atom_; }
    const std::vector<LogicalExpr>& children() const noexcept { return children_; }

    /// Largest atom index referenced anywhere in the tree.
    std::size_t max_atom() const
    {
        if (op_ == Op::Atom) return atom_;
        std::size_t m = 0;
        for (const auto& c : children_) m = std::max(m, c.max_atom());
        return m;
    }

    bool evaluate(const std::vector<bool>& atoms) const
    {
        switch (op_) {
        case Op::Atom: return atoms[atom_];
        case Op::Not: return !children_.front().evaluate(atoms);
        case Op::And:
            return std::all_of(children_.begin(), children_.end(), [&](const LogicalExpr& c) { return c.evaluate(atoms); });
        case Op::Or:
            return std::any_of(children_.begin(), children_.end(), [&](const LogicalExpr& c) { return c.evaluate(atoms); });
        }
        return false;
    }

    bool operator==(const LogicalExpr&) const = default;

private:
    LogicalExpr(Op op, std::size_t atom, std::vector<LogicalExpr> children)
        : op_(op), atom_(atom), children_(std::move(children))
    {
        if (op_ == Op::Not && children_.size() != 1) fail(ErrorKind::InvalidExpression, "NOT takes exactly one operand");
        if ((op_ == Op::And || op_ == Op::Or) && children_.size() < 2) {
            fail(ErrorKind::InvalidExpression, "AND/OR take at least two operands");
        }
    }

    Op op_;
    std::size_t atom_;
    std::vector<LogicalExpr> children_;
};

/// Atomic events followed by logically derived ones; a probability vector over
/// the system has one entry per atom and then one per derived event.
class EventSystem {
public:
    EventSystem(std::size_t atoms, std::vector<LogicalExpr> derived) : atoms_(atoms), derived_(std::move(derived))
    {
        if (atoms_ + derived_.size() == 0) fail(ErrorKind::InvalidExpression, "event system has no events");
        for (const auto& e : derived_) {
            if (atoms_ == 0 || e.max_atom() >= atoms_) {
                fail(ErrorKind::InvalidExpression, "derived event references an atom outside 0.." + std::to_string(atoms_));
            }
        }
    }

    std::size_t atom_count() const noexcept { return atoms_; }
    const std::vector<LogicalExpr>& derived() const noexcept { return derived_; }
    std::size_t dim() const noexcept { return atoms_ + derived_.size(); }

    /// Full 0/1 vector determined by an assignment of the atoms.
    std::vector<int> extend(const std::vector<bool>& atoms) const
    {
        std::vector<int> v(atoms.begin(), atoms.end());
        for (const auto& e : derived_) v.push_back(e.evaluate(atoms) ? 1 : 0);
        return v;
    }

private:
    std::size_t atoms_;
    std::vector<LogicalExpr> derived_;
};

using ZeroOneVector = std::vector<int>;

inline bool is_consistent(const EventSystem& sys, const ZeroOneVector& v)
{
    if (v.size() != sys.dim()) {
        fail(ErrorKind::DimensionMismatch, "vector length " + std::to_string(v.size()) + " differs from system dimension " + std::to_string(sys.dim()));
    }
    std::vector<bool> atoms(sys.atom_count());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (v[i] != 0 && v[i] != 1) return false;
        atoms[i] = v[i] == 1;
    }
    for (std::size_t k = 0; k < sys.derived().size(); ++k) {
        if (v[sys.atom_count() + k] != (sys.derived()[k].evaluate(atoms) ? 1 : 0)) return false;
    }
    return true;
}

/// Every consistent extremal 0/1 assignment, deduplicated and sorted
/// lexicographically. These are the rows of the truth table whose convex hull
/// is the correlation polytope.
inline std::vector<ZeroOneVector> enumerate_vertices(const EventSystem& sys)
{
    if (sys.atom_count() > max_event_atoms) {
        fail(ErrorKind::AtomBoundExceeded, std::to_string(sys.atom_count()) + " atoms exceeds the enumeration bound of " + std::to_string(max_event_atoms));
    }
    const std::uint64_t count = std::uint64_t{1} << sys.atom_count();
    std::vector<ZeroOneVector> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<bool> atoms(sys.atom_count());
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = (mask >> i) & 1U;
        out.push_back(sys.extend(atoms));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline VPolytope correlation_polytope(const EventSystem& sys)
{
    std::vector<RVector> vertices;
    for (const auto& v : enumerate_vertices(sys)) {
        RVector r;
        r.reserve(v.size());
        for (int e : v) r.emplace_back(e);
        vertices.push_back(std::move(r));
    }
    return VPolytope(sys.dim(), std::move(vertices));
}

/// Boole's conditions of possible experience: the facet inequalities of the
/// correlation polytope, each as a . p + a0 >= 0 with coprime integer
/// coefficients.
inline HPolytope boole_conditions(const EventSystem& sys)
{
    if (sys.dim() > max_boole_dim) {
        fail(ErrorKind::DimensionBoundExceeded, "dimension " + std::to_string(sys.dim()) + " exceeds the facet bound of " + std::to_string(max_boole_dim));
    }
    return facets(correlation_polytope(sys));
}

/// The Clauser-Horne / CHSH event system: atoms A1, A2, B1, B2 and the four
/// joint events Ai & Bj, ordered p1, p2, p3, p4, p13, p14, p23, p24.
inline EventSystem chsh_event_system()
{
    using E = LogicalExpr;
    return EventSystem(4, {E::conjunction({E::atom(0), E::atom(2)}), E::conjunction({E::atom(0), E::atom(3)}),
                           E::conjunction({E::atom(1), E::atom(2)}), E::conjunction({E::atom(1), E::atom(3)})});
}

} // namespace corrgeo

#endif
