#ifndef CORRGEO_RAFFLES_HPP
#define CORRGEO_RAFFLES_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "corrgeo/elliptope.hpp"
#include "corrgeo/error.hpp"
#include "corrgeo/polytope.hpp"
#include "corrgeo/rational.hpp"
#include "corrgeo/simplex.hpp"

namespace corrgeo {

inline constexpr int max_raffle_spin2 = 6;  // 2s + 1 <= 7 values per setting

/// Values {-s, ..., s} of a spin-s balanced random variable, stored doubled
/// (m2 = 2m) so half-integer spins stay integral.
class BalancedValueSet {
public:
    explicit BalancedValueSet(int spin2) : spin2_(spin2)
    {
        if (spin2 < 1) fail(ErrorKind::SpinBoundExceeded, "spin must be positive (got 2s = " + std::to_string(spin2) + ")");
    }

    int spin2() const noexcept { return spin2_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(spin2_) + 1; }

    /// Doubled values in descending order: 2s, 2s-2, ..., -2s.
    std::vector<int> doubled_values() const
    {
        std::vector<int> out;
        for (int m2 = spin2_; m2 >= -spin2_; m2 -= 2) out.push_back(m2);
        return out;
    }

    bool contains_doubled(int m2) const { return m2 >= -spin2_ && m2 <= spin2_ && ((m2 + spin2_) % 2 == 0); }

    std::size_t index_of(int m2) const { return static_cast<std::size_t>((spin2_ - m2) / 2); }

    /// Uniform-marginal variance s(s+1)/3.
    Rational sigma2() const { return Rational(spin2_ * (spin2_ + 2), 12); }

    static Rational value(int m2) { return Rational(m2, 2); }

private:
    int spin2_;
};

/// Party 1's outcome for settings a, b, c (doubled); party 2 reports the negation.
using Ticket = std::array<int, 3>;

inline std::string ticket_to_string(const Ticket& t)
{
    return "(" + to_compact_string(BalancedValueSet::value(t[0])) + "," + to_compact_string(BalancedValueSet::value(t[1])) +
           "," + to_compact_string(BalancedValueSet::value(t[2])) + ")";
}

inline void check_ticket(const BalancedValueSet& vs, const Ticket& t)
{
    for (int m2 : t) {
        if (!vs.contains_doubled(m2)) {
            fail(ErrorKind::ValueNotInSet, "ticket " + ticket_to_string(t) + " has a value outside the spin-" + to_compact_string(Rational(vs.spin2(), 2)) + " value set");
        }
    }
}

/// All tickets, ordered lexicographically by value index (descending values).
inline std::vector<Ticket> all_tickets(const BalancedValueSet& vs)
{
    const auto values = vs.doubled_values();
    std::vector<Ticket> out;
    out.reserve(values.size() * values.size() * values.size());
    for (int a : values) {
        for (int b : values) {
            for (int c : values) out.push_back({a, b, c});
        }
    }
    return out;
}

/// (x_a x_b, x_a x_c, x_b x_c, x_a^2, x_b^2, x_c^2)
inline RVector ticket_point(const BalancedValueSet& vs, const Ticket& t)
{
    check_ticket(vs, t);
    const Rational xa = BalancedValueSet::value(t[0]);
    const Rational xb = BalancedValueSet::value(t[1]);
    const Rational xc = BalancedValueSet::value(t[2]);
    return {xa * xb, xa * xc, xb * xc, xa * xa, xb * xb, xc * xc};
}

/// Probability mixture over tickets.
class Raffle {
public:
    Raffle(int spin2, std::map<Ticket, Rational> tickets) : values_(spin2), tickets_(std::move(tickets))
    {
        Rational total = 0;
        for (auto it = tickets_.begin(); it != tickets_.end();) {
            check_ticket(values_, it->first);
            if (it->second.sign() < 0) fail(ErrorKind::BadDistribution, "negative probability for ticket " + ticket_to_string(it->first));
            total += it->second;
            it = it->second.sign() == 0 ? tickets_.erase(it) : std::next(it);
        }
        if (total != 1) fail(ErrorKind::BadDistribution, "ticket probabilities sum to " + to_compact_string(total) + ", not 1");
    }

    const BalancedValueSet& value_set() const noexcept { return values_; }
    const std::map<Ticket, Rational>& tickets() const noexcept { return tickets_; }

    /// Distribution of party 1's value for one setting, indexed like doubled_values().
    RVector marginal(std::size_t setting) const
    {
        RVector out(values_.size(), Rational(0));
        for (const auto& [t, p] : tickets_) out[values_.index_of(t[setting])] += p;
        return out;
    }

    bool operator==(const Raffle& other) const { return values_.spin2() == other.values_.spin2() && tickets_ == other.tickets_; }

private:
    BalancedValueSet values_;
    std::map<Ticket, Rational> tickets_;
};

inline const char* setting_name(std::size_t setting)
{
    static constexpr const char* names[] = {"a", "b", "c"};
    return names[setting];
}

/// Exact (chi_ab, chi_ac, chi_bc) of a uniform-marginal raffle.
inline std::array<Rational, 3> chi_of_raffle_exact(const Raffle& r)
{
    const auto& vs = r.value_set();
    const Rational uniform(1, static_cast<long>(vs.size()));
    for (std::size_t s = 0; s < 3; ++s) {
        const RVector m = r.marginal(s);
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k] != uniform) {
                std::string shown;
                for (std::size_t j = 0; j < m.size(); ++j) shown += (j ? "," : "") + to_compact_string(m[j]);
                fail(ErrorKind::MarginalNotUniform, std::string("setting ") + setting_name(s) + " has marginal [" + shown + "]");
            }
        }
    }
    std::array<Rational, 3> sums{};
    for (const auto& [t, p] : r.tickets()) {
        sums[0] += p * t[0] * t[1];
        sums[1] += p * t[0] * t[2];
        sums[2] += p * t[1] * t[2];
    }
    const Rational scale = 4 * vs.sigma2();  // doubled values carry a factor of 4
    for (auto& s : sums) s /= scale;
    return sums;
}

inline CorrelationTriple chi_of_raffle(const Raffle& r)
{
    const auto c = chi_of_raffle_exact(r);
    return {to_double(c[0]), to_double(c[1]), to_double(c[2])};
}

/// elliptope_value in exact arithmetic.
inline Rational elliptope_value_exact(const std::array<Rational, 3>& chi)
{
    const Rational& ab = chi[0];
    const Rational& ac = chi[1];
    const Rational& bc = chi[2];
    return Rational(1) - ab * ab - ac * ac - bc * bc + 2 * ab * ac * bc;
}

/// Halfspace over (chi_ab, chi_ac, chi_bc) as text, e.g. "chi_ab+chi_ac+chi_bc >= -1".
inline std::string chi_inequality_string(const Halfspace& h)
{
    static constexpr const char* names[] = {"chi_ab", "chi_ac", "chi_bc"};
    std::string lhs;
    for (std::size_t i = 0; i < h.a.size() && i < 3; ++i) {
        const Rational& c = h.a[i];
        if (c.sign() == 0) continue;
        if (c.sign() < 0) lhs += "-";
        else if (!lhs.empty()) lhs += "+";
        if (abs(c) != 1) lhs += to_compact_string(Rational(abs(c))) + "*";
        lhs += names[i];
    }
    if (lhs.empty()) lhs = "0";
    return lhs + " >= " + to_compact_string(Rational(-h.offset));
}

namespace detail {

inline void check_raffle_spin(const BalancedValueSet& vs)
{
    if (vs.spin2() > max_raffle_spin2) {
        fail(ErrorKind::SpinBoundExceeded, "2s = " + std::to_string(vs.spin2()) + " exceeds the raffle bound of " + std::to_string(max_raffle_spin2));
    }
}

/// Normalization plus uniform-marginal rows over ticket probabilities. The last
/// value of each setting is omitted since it is implied by normalization.
struct RaffleLp {
    std::vector<Ticket> tickets;
    exact::Matrix rows;
    RVector rhs;
};

inline RaffleLp uniform_marginal_constraints(const BalancedValueSet& vs)
{
    RaffleLp lp;
    lp.tickets = all_tickets(vs);
    const std::size_t n = lp.tickets.size();
    const auto values = vs.doubled_values();
    lp.rows.push_back(RVector(n, Rational(1)));
    lp.rhs.push_back(Rational(1));
    const Rational uniform(1, static_cast<long>(values.size()));
    for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            RVector row(n, Rational(0));
            for (std::size_t j = 0; j < n; ++j) {
                if (lp.tickets[j][s] == values[k]) row[j] = 1;
            }
            lp.rows.push_back(std::move(row));
            lp.rhs.push_back(uniform);
        }
    }
    return lp;
}

/// chi_st contribution per ticket: x_s x_t / sigma^2.
inline exact::Matrix chi_map(const BalancedValueSet& vs, const std::vector<Ticket>& tickets)
{
    static constexpr std::array<std::array<std::size_t, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    const Rational scale = 4 * vs.sigma2();
    exact::Matrix map(3, RVector(tickets.size()));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < tickets.size(); ++j) {
            map[i][j] = Rational(tickets[j][pairs[i][0]] * tickets[j][pairs[i][1]]) / scale;
        }
    }
    return map;
}

/// Relabelling settings and negating the values of any setting map
/// uniform-marginal raffles to uniform-marginal raffles; on chi this acts as
/// the 24 signed permutations chi_st -> e_s e_t chi_{pi(s) pi(t)}.
inline std::vector<exact::Matrix> chi_symmetries()
{
    auto pair_index = [](std::size_t s, std::size_t t) { return s + t - 1; };
    static constexpr std::array<std::array<std::size_t, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    std::array<std::size_t, 3> perm{0, 1, 2};
    std::vector<exact::Matrix> out;
    do {
        for (int mask = 0; mask < 8; ++mask) {
            exact::Matrix g(3, RVector(3, Rational(0)));
            for (std::size_t i = 0; i < 3; ++i) {
                const auto [s, t] = pairs[i];
                const int sign = (((mask >> s) ^ (mask >> t)) & 1) ? -1 : 1;
                g[i][pair_index(perm[s], perm[t])] = sign;
            }
            if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace detail

/// Exact 3D polytope of chi triples reachable by uniform-marginal raffles:
/// the linear image of the ticket-probability polytope, computed by LP.
/// Results are memoized per spin.
inline VPolytope raffle_polytope(const BalancedValueSet& vs)
{
    detail::check_raffle_spin(vs);
    static std::mutex guard;
    static std::map<int, VPolytope> cache;
    {
        std::lock_guard lock(guard);
        if (auto it = cache.find(vs.spin2()); it != cache.end()) return it->second;
    }
    const auto lp = detail::uniform_marginal_constraints(vs);
    VPolytope result = linear_image(lp.rows, lp.rhs, detail::chi_map(vs, lp.tickets), detail::chi_symmetries());
    std::lock_guard lock(guard);
    return cache.emplace(vs.spin2(), std::move(result)).first->second;
}

inline HPolytope raffle_facets(const BalancedValueSet& vs)
{
    detail::check_raffle_spin(vs);
    static std::mutex guard;
    static std::map<int, HPolytope> cache;
    {
        std::lock_guard lock(guard);
        if (auto it = cache.find(vs.spin2()); it != cache.end()) return it->second;
    }
    HPolytope result = facets(raffle_polytope(vs));
    std::lock_guard lock(guard);
    return cache.emplace(vs.spin2(), std::move(result)).first->second;
}

/// The lifted construction: hull of the 6D ticket points, sliced where every
/// mean square equals s(s+1)/3, projected onto the product coordinates and
/// rescaled by 1/sigma^2. The square constraint only fixes second moments, so
/// this body contains raffle_polytope and equals it for 2s <= 3.
inline VPolytope variance_slice_polytope(const BalancedValueSet& vs)
{
    detail::check_raffle_spin(vs);
    std::vector<RVector> points;
    for (const auto& t : all_tickets(vs)) points.push_back(ticket_point(vs, t));
    const VPolytope lifted = VPolytope::hull(6, std::move(points));
    const Rational sigma2 = vs.sigma2();
    std::vector<Halfspace> eqs;
    for (std::size_t k = 3; k < 6; ++k) {
        RVector a(6, Rational(0));
        a[k] = 1;
        eqs.push_back({a, Rational(-sigma2)});
    }
    const VPolytope projected = project(slice(lifted, eqs), {0, 1, 2});
    std::vector<RVector> scaled;
    for (auto v : projected.vertices()) {
        for (auto& c : v) c /= sigma2;
        scaled.push_back(std::move(v));
    }
    return VPolytope(3, std::move(scaled));
}

struct FeasibilityCertificate {
    bool feasible = false;
    std::optional<Raffle> witness;
    std::optional<Halfspace> facet;  // violated facet of raffle_polytope, chi coordinates
};

/// Exact LP over ticket probabilities with uniform marginals and the given
/// chi. Infeasible answers carry the most violated facet of raffle_polytope
/// (violation measured per unit L1 norm of the normal; ties keep the first).
inline FeasibilityCertificate feasible(const BalancedValueSet& vs, const std::array<Rational, 3>& chi)
{
    detail::check_raffle_spin(vs);
    for (const auto& c : chi) {
        if (c > 1 || c < -1) fail(ErrorKind::NotInElliptope, "chi component " + to_compact_string(c) + " outside [-1, 1]");
    }
    auto lp = detail::uniform_marginal_constraints(vs);
    const exact::Matrix map = detail::chi_map(vs, lp.tickets);
    const std::size_t marginal_rows = lp.rows.size();
    for (std::size_t i = 0; i < 3; ++i) {
        lp.rows.push_back(map[i]);
        lp.rhs.push_back(chi[i]);
    }
    ExactSimplex simplex(lp.rows, lp.rhs);
    FeasibilityCertificate cert;
    if (simplex.find_feasible_basis()) {
        cert.feasible = true;
        const RVector p = simplex.solution();
        std::map<Ticket, Rational> mix;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (p[j].sign() > 0) mix.emplace(lp.tickets[j], p[j]);
        }
        cert.witness.emplace(vs.spin2(), std::move(mix));
        return cert;
    }

    const RVector x(chi.begin(), chi.end());
    const HPolytope h = raffle_facets(vs);
    Rational worst = 0;
    for (const auto& f : h.halfspaces()) {
        const Rational s = f.slack(x);
        if (s.sign() >= 0) continue;
        Rational norm = 0;
        for (const auto& c : f.a) norm += abs(c);
        const Rational score = s / norm;
        if (!cert.facet || score < worst) {
            worst = score;
            cert.facet = f;
        }
    }
    if (!cert.facet) {
        // Farkas combination projected onto chi space; valid and violated, but
        // not necessarily a facet. Only reachable if the cached hull were stale.
        const RVector& z = simplex.farkas();
        Halfspace sep{RVector(3), Rational(0)};
        for (std::size_t r = 0; r < marginal_rows; ++r) sep.offset += z[r] * lp.rhs[r];
        for (std::size_t i = 0; i < 3; ++i) sep.a[i] = z[marginal_rows + i];
        cert.facet = sep.normalized();
    }
    return cert;
}

inline FeasibilityCertificate feasible(const BalancedValueSet& vs, const CorrelationTriple& t)
{
    return feasible(vs, {rational_from_double(t.chi_ab), rational_from_double(t.chi_ac), rational_from_double(t.chi_bc)});
}

/// Counter-based stream: word j of seed k is the j-th output of SplitMix64
/// started at k, computed directly, so any draw can be regenerated without
/// replaying earlier ones.
struct CounterRng {
    static constexpr const char* algorithm = "splitmix64-counter/v1";

    static std::uint64_t word(std::uint64_t seed, std::uint64_t index)
    {
        std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, 3).
    static std::size_t setting(std::uint64_t w) { return static_cast<std::size_t>(((w >> 32) * 3) >> 32); }
};

struct SimulationReport {
    std::uint64_t seed = 0;
    std::uint64_t n_draws = 0;
    std::size_t shards = 1;
    std::string generator = CounterRng::algorithm;
    CorrelationTriple chi;
    double sigma2 = 0.0;                                  // empirical mean square outcome
    std::array<std::uint64_t, 3> pair_draws{};            // draws contributing to ab, ac, bc
    // histogram[party][setting][value index], counted only when that setting was measured
    std::array<std::array<std::vector<std::uint64_t>, 3>, 2> histogram;
};

namespace detail {

struct SimulationTotals {
    std::array<std::int64_t, 3> product_sum{};   // doubled units (factor 4)
    std::array<std::uint64_t, 3> pair_draws{};
    std::int64_t square_sum = 0;                 // doubled units, both parties
    std::uint64_t outcomes = 0;
    std::array<std::array<std::vector<std::uint64_t>, 3>, 2> histogram;

    void merge(const SimulationTotals& o)
    {
        for (std::size_t i = 0; i < 3; ++i) {
            product_sum[i] += o.product_sum[i];
            pair_draws[i] += o.pair_draws[i];
        }
        square_sum += o.square_sum;
        outcomes += o.outcomes;
        for (std::size_t p = 0; p < 2; ++p) {
            for (std::size_t s = 0; s < 3; ++s) {
                for (std::size_t k = 0; k < histogram[p][s].size(); ++k) histogram[p][s][k] += o.histogram[p][s][k];
            }
        }
    }
};

} // namespace detail

/// Monte Carlo run of the two-party experiment: each draw picks a ticket from
/// the raffle and an independent uniform setting for each party. Totals are
/// integers, so results are bit-identical for every shard count.
inline SimulationReport simulate(const Raffle& r, std::uint64_t n_draws, std::uint64_t seed, std::size_t shards = 1)
{
    if (n_draws == 0) fail(ErrorKind::DimensionMismatch, "n_draws must be at least 1");
    shards = std::max<std::size_t>(1, std::min<std::size_t>(shards, static_cast<std::size_t>(n_draws)));
    const auto& vs = r.value_set();

    std::vector<Ticket> tickets;
    std::vector<std::uint64_t> thresholds;  // cumulative probability scaled to 2^53
    {
        Rational cumulative = 0;
        const Rational scale(Integer(1) << 53);
        for (const auto& [t, p] : r.tickets()) {
            cumulative += p;
            tickets.push_back(t);
            Rational scaled = cumulative * scale;
            Integer floor_value = numerator_of(scaled) / denominator_of(scaled);
            thresholds.push_back(floor_value.convert_to<std::uint64_t>());
        }
        thresholds.back() = std::uint64_t{1} << 53;
    }

    auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
        detail::SimulationTotals totals;
        for (auto& party : totals.histogram) {
            for (auto& h : party) h.assign(vs.size(), 0);
        }
        for (std::uint64_t i = begin; i < end; ++i) {
            const std::uint64_t u = CounterRng::word(seed, 3 * i) >> 11;
            const std::size_t pick = static_cast<std::size_t>(std::upper_bound(thresholds.begin(), thresholds.end(), u) - thresholds.begin());
            const Ticket& t = tickets[std::min(pick, tickets.size() - 1)];
            const std::size_t s1 = CounterRng::setting(CounterRng::word(seed, 3 * i + 1));
            const std::size_t s2 = CounterRng::setting(CounterRng::word(seed, 3 * i + 2));
            const int x1 = t[s1];
            const int x2 = -t[s2];
            totals.histogram[0][s1][vs.index_of(x1)] += 1;
            totals.histogram[1][s2][vs.index_of(x2)] += 1;
            totals.square_sum += x1 * x1 + x2 * x2;
            totals.outcomes += 2;
            if (s1 != s2) {
                const std::size_t pair = s1 + s2 - 1;  // {0,1}->0, {0,2}->1, {1,2}->2
                totals.product_sum[pair] += x1 * x2;
                totals.pair_draws[pair] += 1;
            }
        }
        return totals;
    };

    std::vector<detail::SimulationTotals> parts(shards);
    {
        std::vector<std::thread> workers;
        for (std::size_t k = 0; k < shards; ++k) {
            const std::uint64_t begin = n_draws * k / shards;
            const std::uint64_t end = n_draws * (k + 1) / shards;
            workers.emplace_back([&parts, &run_range, k, begin, end] { parts[k] = run_range(begin, end); });
        }
        for (auto& w : workers) w.join();
    }
    detail::SimulationTotals total = parts.front();
    for (std::size_t k = 1; k < shards; ++k) total.merge(parts[k]);

    SimulationReport report;
    report.seed = seed;
    report.n_draws = n_draws;
    report.shards = shards;
    report.histogram = total.histogram;
    report.pair_draws = total.pair_draws;
    const double mean_square = static_cast<double>(total.square_sum) / static_cast<double>(total.outcomes);
    report.sigma2 = mean_square / 4.0;
    std::array<double, 3> chi{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (total.pair_draws[i] == 0 || mean_square == 0.0) continue;
        const double mean_product = static_cast<double>(total.product_sum[i]) / static_cast<double>(total.pair_draws[i]);
        chi[i] = -mean_product / mean_square;
    }
    report.chi = {chi[0], chi[1], chi[2]};
    return report;
}

} // namespace corrgeo

#endif
