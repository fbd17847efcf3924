#ifndef CORRGEO_QUANTUM_HPP
#define CORRGEO_QUANTUM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "corrgeo/elliptope.hpp"
#include "corrgeo/error.hpp"
#include "corrgeo/raffles.hpp"

namespace corrgeo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int max_quantum_spin2 = 20;  // 2s + 1 <= 21

/// Numerical tolerance by Hilbert-space dimension: 1e-12 up to dimension 8,
/// 1e-9 beyond.
inline double tolerance_for(std::size_t dim) { return dim <= 8 ? 1e-12 : 1e-9; }

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
}

namespace detail {

inline void check_quantum_spin(int spin2)
{
    if (spin2 < 1 || spin2 > max_quantum_spin2) {
        fail(ErrorKind::SpinBoundExceeded, "2s = " + std::to_string(spin2) + " outside 1.." + std::to_string(max_quantum_spin2));
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Spin operators and directions

struct SpinOperators {
    int spin2 = 1;
    CMatrix sx, sy, sz;

    std::size_t dim() const { return static_cast<std::size_t>(spin2) + 1; }
    double s() const { return spin2 / 2.0; }

    /// n . S for a direction n.
    CMatrix along(const Vec3& n) const { return n[0] * sx + n[1] * sy + n[2] * sz; }
};

/// Basis |m> ordered m = s, s-1, ..., -s; hbar = 1.
inline SpinOperators spin_ops(int spin2)
{
    detail::check_quantum_spin(spin2);
    const auto d = static_cast<Eigen::Index>(spin2 + 1);
    const double s = spin2 / 2.0;
    SpinOperators ops;
    ops.spin2 = spin2;
    ops.sz = CMatrix::Zero(d, d);
    CMatrix raise = CMatrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double m = s - static_cast<double>(k);
        ops.sz(k, k) = m;
        if (k > 0) raise(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));  // S+ |m> = c |m+1>
    }
    const CMatrix lower = raise.adjoint();
    ops.sx = (raise + lower) / 2.0;
    ops.sy = (raise - lower) / Complex(0.0, 2.0);
    return ops;
}

inline Vec3 direction_from_spherical(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

inline void check_direction(const Vec3& n)
{
    const double norm = std::sqrt(dot3(n, n));
    if (std::abs(norm - 1.0) > 1e-10) fail(ErrorKind::NotNormalized, "direction has norm " + std::to_string(norm));
}

// ---------------------------------------------------------------------------
// States

class Ket {
public:
    explicit Ket(CVector amplitudes) : amps_(std::move(amplitudes))
    {
        const double tol = tolerance_for(dim());
        if (amps_.size() == 0) fail(ErrorKind::InvalidState, "empty ket");
        if (std::abs(amps_.norm() - 1.0) > tol) fail(ErrorKind::NotNormalized, "ket norm " + std::to_string(amps_.norm()));
    }

    static Ket normalized(const CVector& v) { return Ket(v / v.norm()); }

    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const CVector& amplitudes() const { return amps_; }
    CMatrix projector() const { return amps_ * amps_.adjoint(); }

private:
    CVector amps_;
};

class DensityOperator {
public:
    explicit DensityOperator(CMatrix rho) : rho_(std::move(rho))
    {
        if (rho_.rows() != rho_.cols() || rho_.rows() == 0) fail(ErrorKind::InvalidState, "density operator must be a nonempty square matrix");
        const double tol = tolerance_for(dim());
        if (max_abs(rho_ - rho_.adjoint()) > tol) fail(ErrorKind::NotHermitian, "density operator is not Hermitian");
        if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > tol) fail(ErrorKind::InvalidState, "density operator trace differs from 1");
        const CMatrix herm = (rho_ + rho_.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10) fail(ErrorKind::InvalidState, "density operator has a negative eigenvalue");
    }

    static DensityOperator pure(const Ket& k) { return DensityOperator(k.projector()); }

    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const CMatrix& matrix() const { return rho_; }

private:
    CMatrix rho_;
};

/// (2s+1)^{-1/2} sum_m (-1)^{s-m} |m> (x) |-m>, the total-spin-zero state.
inline Ket singlet(int spin2)
{
    detail::check_quantum_spin(spin2);
    const auto d = static_cast<Eigen::Index>(spin2 + 1);
    CVector psi = CVector::Zero(d * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index k = 0; k < d; ++k) {
        // |m> has index k with m = s - k, so |-m> has index 2s - k.
        psi(k * d + (d - 1 - k)) = (k % 2 == 0 ? amp : -amp);
    }
    return Ket(psi);
}

inline double expectation(const Ket& psi, const CMatrix& op)
{
    return (psi.amplitudes().adjoint() * op * psi.amplitudes())(0, 0).real();
}

/// <(a.S) (x) (b.S)> on the spin-s singlet; equals -(s(s+1)/3) a.b.
inline double singlet_correlation(int spin2, const Vec3& a, const Vec3& b)
{
    const SpinOperators ops = spin_ops(spin2);
    return expectation(singlet(spin2), kron(ops.along(a), ops.along(b)));
}

/// Anti-correlation coefficient between party 1 measuring along a and party 2
/// along b: the raw correlation divided by -sigma^2, sigma^2 = s(s+1)/3.
inline double chi_quantum(int spin2, const Vec3& a, const Vec3& b)
{
    detail::check_quantum_spin(spin2);
    check_direction(a);
    check_direction(b);
    const double s = spin2 / 2.0;
    const double sigma2 = s * (s + 1.0) / 3.0;
    return -singlet_correlation(spin2, a, b) / sigma2;
}

/// Measurement directions whose singlet correlations realize the triple.
inline std::array<Vec3, 3> saturate(const CorrelationTriple& t, int spin2)
{
    detail::check_quantum_spin(spin2);
    const GramRealization g = gram_vectors(t);
    return {g.a, g.b, g.c};
}

inline CorrelationTriple chi_triple(int spin2, const std::array<Vec3, 3>& dirs)
{
    return {chi_quantum(spin2, dirs[0], dirs[1]), chi_quantum(spin2, dirs[0], dirs[2]), chi_quantum(spin2, dirs[1], dirs[2])};
}

// ---------------------------------------------------------------------------
// Boolean frames

/// Interval of observable values; the question "is the value of A in this range?"
struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = true;

    static ValueRange point(double x) { return {x, x, true, true}; }

    bool contains(double x) const
    {
        const bool above = lo_closed ? x >= lo : x > lo;
        const bool below = hi_closed ? x <= hi : x < hi;
        return above && below;
    }

    bool overlaps(const ValueRange& o) const
    {
        if (hi < o.lo || o.hi < lo) return false;
        if (hi == o.lo) return hi_closed && o.lo_closed;
        if (o.hi == lo) return o.hi_closed && lo_closed;
        return true;
    }

    std::string to_string() const
    {
        return std::string(lo_closed ? "[" : "(") + std::to_string(lo) + ", " + std::to_string(hi) + (hi_closed ? "]" : ")");
    }
};

struct FrameElement {
    ValueRange range;
    CMatrix projector;
};

/// The yes/no questions about one observable: orthogonal projectors summing
/// to the identity, each labelled by the value range it answers for.
class BooleanFrame {
public:
    BooleanFrame(std::vector<FrameElement> elements, CMatrix observable)
        : elements_(std::move(elements)), observable_(std::move(observable))
    {
        if (elements_.empty()) fail(ErrorKind::InvalidState, "frame has no projectors");
        const auto d = elements_.front().projector.rows();
        CMatrix sum = CMatrix::Zero(d, d);
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            const CMatrix& p = elements_[i].projector;
            if (p.rows() != d || p.cols() != d) fail(ErrorKind::DimensionMismatch, "frame projectors differ in dimension");
            if (max_abs(p * p - p) > 1e-10) fail(ErrorKind::InvalidState, "frame element is not idempotent");
            for (std::size_t j = 0; j < i; ++j) {
                if (max_abs(p * elements_[j].projector) > 1e-10) fail(ErrorKind::InvalidState, "frame projectors are not orthogonal");
            }
            sum += p;
        }
        if (max_abs(sum - CMatrix::Identity(d, d)) > 1e-10) fail(ErrorKind::InvalidState, "frame projectors do not sum to the identity");
    }

    std::size_t dim() const { return static_cast<std::size_t>(elements_.front().projector.rows()); }
    const std::vector<FrameElement>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    const CMatrix& observable() const { return observable_; }

private:
    std::vector<FrameElement> elements_;
    CMatrix observable_;
};

inline constexpr double eigenvalue_merge_threshold = 1e-9;

/// Spectral frame of a Hermitian observable. Eigenvalues are sorted descending
/// and neighbours within 1e-9 share a projector; with `ranges`, projectors are
/// summed per range (ranges must be disjoint and cover the spectrum).
inline BooleanFrame frame_of(const CMatrix& observable, const std::optional<std::vector<ValueRange>>& ranges = std::nullopt)
{
    if (observable.rows() != observable.cols() || observable.rows() == 0) fail(ErrorKind::DimensionMismatch, "observable must be square");
    if (max_abs(observable - observable.adjoint()) > 1e-10) fail(ErrorKind::NotHermitian, "observable is not Hermitian");
    const CMatrix herm = (observable + observable.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
    const auto d = observable.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) order[static_cast<std::size_t>(i)] = d - 1 - i;  // ascending -> descending

    std::vector<FrameElement> elements;
    if (!ranges) {
        std::size_t start = 0;
        while (start < order.size()) {
            std::size_t end = start + 1;
            while (end < order.size() &&
                   es.eigenvalues()(order[end - 1]) - es.eigenvalues()(order[end]) <= eigenvalue_merge_threshold) {
                ++end;
            }
            CMatrix p = CMatrix::Zero(d, d);
            for (std::size_t k = start; k < end; ++k) {
                const CVector v = es.eigenvectors().col(order[k]);
                p += v * v.adjoint();
            }
            const double hi = es.eigenvalues()(order[start]);
            const double lo = es.eigenvalues()(order[end - 1]);
            elements.push_back({ValueRange{lo, hi, true, true}, std::move(p)});
            start = end;
        }
        return BooleanFrame(std::move(elements), observable);
    }

    const auto& rs = *ranges;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (rs[i].overlaps(rs[j])) fail(ErrorKind::OverlappingRanges, rs[i].to_string() + " overlaps " + rs[j].to_string());
        }
    }
    for (const auto& r : rs) elements.push_back({r, CMatrix::Zero(d, d)});
    for (auto idx : order) {
        const double lambda = es.eigenvalues()(idx);
        auto hit = std::find_if(rs.begin(), rs.end(), [&](const ValueRange& r) { return r.contains(lambda); });
        if (hit == rs.end()) fail(ErrorKind::UncoveredEigenvalue, "eigenvalue " + std::to_string(lambda) + " lies in no range");
        const CVector v = es.eigenvectors().col(idx);
        elements[static_cast<std::size_t>(hit - rs.begin())].projector += v * v.adjoint();
    }
    return BooleanFrame(std::move(elements), observable);
}

/// Frame of the standard basis projectors |k><k|.
inline BooleanFrame computational_frame(std::size_t dim)
{
    const auto d = static_cast<Eigen::Index>(dim);
    CMatrix obs = CMatrix::Zero(d, d);
    std::vector<FrameElement> elements;
    for (Eigen::Index k = 0; k < d; ++k) {
        CMatrix p = CMatrix::Zero(d, d);
        p(k, k) = 1.0;
        obs(k, k) = static_cast<double>(d - 1 - k);
        elements.push_back({ValueRange::point(static_cast<double>(d - 1 - k)), std::move(p)});
    }
    return BooleanFrame(std::move(elements), obs);
}

/// Commuting projectors: the two frames embed in one Boolean algebra.
inline bool frames_compatible(const BooleanFrame& f1, const BooleanFrame& f2)
{
    if (f1.dim() != f2.dim()) fail(ErrorKind::DimensionMismatch, "frames act on different dimensions");
    for (const auto& p : f1.elements()) {
        for (const auto& q : f2.elements()) {
            if (max_abs(p.projector * q.projector - q.projector * p.projector) > 1e-10) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Born rule, partial trace, ensembles, no-signalling

inline std::vector<double> born(const DensityOperator& rho, const BooleanFrame& frame)
{
    if (rho.dim() != frame.dim()) fail(ErrorKind::DimensionMismatch, "state and frame dimensions differ");
    std::vector<double> out;
    out.reserve(frame.size());
    for (const auto& e : frame.elements()) out.push_back((rho.matrix() * e.projector).trace().real());
    return out;
}

inline std::vector<double> born(const Ket& psi, const BooleanFrame& frame)
{
    if (psi.dim() != frame.dim()) fail(ErrorKind::DimensionMismatch, "state and frame dimensions differ");
    std::vector<double> out;
    out.reserve(frame.size());
    for (const auto& e : frame.elements()) out.push_back(expectation(psi, e.projector));
    return out;
}

enum class Subsystem { A, B };

inline DensityOperator partial_trace(const DensityOperator& rho, std::size_t dim_a, std::size_t dim_b, Subsystem keep)
{
    if (dim_a * dim_b != rho.dim()) {
        fail(ErrorKind::DimensionMismatch, std::to_string(dim_a) + " x " + std::to_string(dim_b) + " does not match dimension " + std::to_string(rho.dim()));
    }
    const auto da = static_cast<Eigen::Index>(dim_a);
    const auto db = static_cast<Eigen::Index>(dim_b);
    const CMatrix& m = rho.matrix();
    if (keep == Subsystem::A) {
        CMatrix out = CMatrix::Zero(da, da);
        for (Eigen::Index i = 0; i < da; ++i) {
            for (Eigen::Index j = 0; j < da; ++j) {
                for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
            }
        }
        return DensityOperator(out);
    }
    CMatrix out = CMatrix::Zero(db, db);
    for (Eigen::Index i = 0; i < db; ++i) {
        for (Eigen::Index j = 0; j < db; ++j) {
            for (Eigen::Index k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
        }
    }
    return DensityOperator(out);
}

/// sum_i p_i |psi_i><psi_i|
inline DensityOperator ensemble_density(const std::vector<std::pair<double, Ket>>& ensemble)
{
    if (ensemble.empty()) fail(ErrorKind::BadDistribution, "empty ensemble");
    const auto d = static_cast<Eigen::Index>(ensemble.front().second.dim());
    CMatrix rho = CMatrix::Zero(d, d);
    double total = 0.0;
    for (const auto& [p, psi] : ensemble) {
        if (p < 0.0) fail(ErrorKind::BadDistribution, "negative ensemble weight");
        if (static_cast<Eigen::Index>(psi.dim()) != d) fail(ErrorKind::DimensionMismatch, "ensemble members differ in dimension");
        total += p;
        rho += p * psi.projector();
    }
    if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::BadDistribution, "ensemble weights sum to " + std::to_string(total));
    return DensityOperator(rho);
}

/// State after measuring frame F on subsystem B without reading the outcome:
/// sum_k (I (x) Q_k) rho (I (x) Q_k).
inline DensityOperator nonselective_measurement_b(const DensityOperator& rho, std::size_t dim_a, const BooleanFrame& frame_b)
{
    const CMatrix id_a = CMatrix::Identity(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_a));
    const auto d = static_cast<Eigen::Index>(rho.dim());
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto& e : frame_b.elements()) {
        const CMatrix q = kron(id_a, e.projector);
        out += q * rho.matrix() * q;
    }
    return DensityOperator(out);
}

/// Largest total-variation distance between A's outcome distribution in each
/// frame of `frames_a` before and after a non-selective measurement of each
/// frame of `frames_b` on B. Without `frames_a` the standard basis of A is used.
inline double no_signalling_check(const DensityOperator& rho, std::size_t dim_a, std::size_t dim_b,
                                  const std::vector<BooleanFrame>& frames_b, std::vector<BooleanFrame> frames_a = {})
{
    if (dim_a * dim_b != rho.dim()) fail(ErrorKind::DimensionMismatch, "subsystem dimensions do not match the state");
    if (frames_a.empty()) frames_a.push_back(computational_frame(dim_a));
    const DensityOperator rho_a = partial_trace(rho, dim_a, dim_b, Subsystem::A);
    double worst = 0.0;
    for (const auto& fb : frames_b) {
        if (fb.dim() != dim_b) fail(ErrorKind::DimensionMismatch, "frame does not act on subsystem B");
        const DensityOperator after = nonselective_measurement_b(rho, dim_a, fb);
        for (const auto& fa : frames_a) {
            if (fa.dim() != dim_a) fail(ErrorKind::DimensionMismatch, "frame does not act on subsystem A");
            const std::vector<double> before = born(rho_a, fa);
            const std::vector<double> now = born(partial_trace(after, dim_a, dim_b, Subsystem::A), fa);
            double tv = 0.0;
            for (std::size_t i = 0; i < before.size(); ++i) tv += std::abs(before[i] - now[i]);
            worst = std::max(worst, tv / 2.0);
        }
    }
    return worst;
}

/// Whether a single joint distribution over three balanced variables with
/// `values_per_variable` values and uniform marginals reproduces the pairwise
/// anti-correlations; a "no" carries the violated Bell-type facet.
inline FeasibilityCertificate global_boolean_embedding_exists(const CorrelationTriple& t, int values_per_variable)
{
    if (values_per_variable < 2 || values_per_variable > max_raffle_spin2 + 1) {
        fail(ErrorKind::SpinBoundExceeded, std::to_string(values_per_variable) + " values per variable is outside 2.." + std::to_string(max_raffle_spin2 + 1));
    }
    return feasible(BalancedValueSet(values_per_variable - 1), t);
}

} // namespace corrgeo

#endif
