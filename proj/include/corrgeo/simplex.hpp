#ifndef CORRGEO_SIMPLEX_HPP
#define CORRGEO_SIMPLEX_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "corrgeo/error.hpp"
#include "corrgeo/exact_linalg.hpp"
#include "corrgeo/rational.hpp"

namespace corrgeo {

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Exact two-phase tableau simplex for problems in standard form
///
///     A x = b,  x >= 0.
///
/// Entering columns are chosen by Dantzig's rule (most negative reduced cost)
/// until a run of degenerate pivots appears; the solve then switches to Bland's
/// rule (lowest-index entering column), which cannot cycle. Leaving rows always
/// break ratio ties by lowest basic-variable index. The object
/// keeps its basis between calls, so repeated `minimize` calls over the same
/// feasible region warm-start from the previous optimum.
class ExactSimplex {
public:
    static constexpr std::size_t bland_switch_streak = 50;

    ExactSimplex(exact::Matrix a, RVector b) : rows_(a.size()), cols_(a.empty() ? 0 : a.front().size())
    {
        if (b.size() != rows_) fail(ErrorKind::DimensionMismatch, "LP right-hand side length differs from row count");
        for (const auto& r : a) {
            if (r.size() != cols_) fail(ErrorKind::DimensionMismatch, "ragged LP constraint matrix");
        }
        sign_.assign(rows_, 1);
        tableau_.resize(rows_);
        rhs_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (b[i].sign() < 0) sign_[i] = -1;
            tableau_[i].resize(cols_ + rows_, Rational(0));
            for (std::size_t j = 0; j < cols_; ++j) {
                tableau_[i][j] = sign_[i] < 0 ? Rational(-a[i][j]) : a[i][j];
            }
            tableau_[i][cols_ + i] = 1;
            rhs_[i] = sign_[i] < 0 ? Rational(-b[i]) : b[i];
        }
        basis_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) basis_[i] = cols_ + i;
    }

    std::size_t variable_count() const noexcept { return cols_; }
    std::size_t constraint_count() const noexcept { return rows_; }

    /// Phase 1. Returns false when {A x = b, x >= 0} is empty; `farkas()` then
    /// holds z with z^T A >= 0 componentwise and z^T b < 0.
    bool find_feasible_basis()
    {
        if (phase_one_done_) return feasible_;
        phase_one_done_ = true;
        const std::size_t width = cols_ + rows_;
        RVector cost(width, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) cost[cols_ + i] = 1;
        run(cost, width, /*allow_artificial_entry=*/false);
        Rational infeasibility = 0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] >= cols_) infeasibility += rhs_[i];
        }
        if (infeasibility.sign() > 0) {
            feasible_ = false;
            // Phase-one duals y' = c_B B^{-1}; the artificial columns hold B^{-1}.
            farkas_.assign(rows_, Rational(0));
            for (std::size_t k = 0; k < rows_; ++k) {
                Rational y = 0;
                for (std::size_t i = 0; i < rows_; ++i) {
                    if (basis_[i] >= cols_) y += tableau_[i][cols_ + k];
                }
                farkas_[k] = sign_[k] < 0 ? y : Rational(-y);
            }
            return false;
        }
        feasible_ = true;
        drive_out_artificials();
        for (auto& row : tableau_) row.resize(cols_);
        return true;
    }

    /// Phase 2 from the current basis. Requires a successful phase 1.
    LpStatus minimize(const RVector& cost)
    {
        if (cost.size() != cols_) fail(ErrorKind::DimensionMismatch, "LP cost length differs from variable count");
        if (!find_feasible_basis()) return LpStatus::Infeasible;
        RVector padded(cols_ + rows_, Rational(0));
        for (std::size_t j = 0; j < cols_; ++j) padded[j] = cost[j];
        return run(padded, cols_, false) ? LpStatus::Optimal : LpStatus::Unbounded;
    }

    LpStatus maximize(const RVector& cost)
    {
        RVector neg(cost.size());
        for (std::size_t j = 0; j < cost.size(); ++j) neg[j] = -cost[j];
        return minimize(neg);
    }

    RVector solution() const
    {
        RVector x(cols_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < cols_) x[basis_[i]] = rhs_[i];
        }
        return x;
    }

    const RVector& farkas() const noexcept { return farkas_; }
    std::size_t pivot_count() const noexcept { return pivots_; }

private:
    // Returns false on unboundedness.
    bool run(const RVector& cost, std::size_t width, bool allow_artificial_entry)
    {
        const std::size_t enter_limit = allow_artificial_entry ? cost.size() : cols_;
        RVector reduced(width, Rational(0));
        for (std::size_t j = 0; j < width; ++j) {
            Rational r = cost[j];
            for (std::size_t i = 0; i < rows_; ++i) {
                const Rational& cb = cost_of(cost, basis_[i]);
                if (!is_zero(cb) && !is_zero(tableau_[i][j])) r -= cb * tableau_[i][j];
            }
            reduced[j] = std::move(r);
        }
        std::vector<bool> basic(cols_ + rows_, false);
        for (auto b : basis_) basic[b] = true;

        std::size_t degenerate_streak = 0;
        bool bland = false;
        for (;;) {
            std::size_t enter = width;
            const std::size_t limit = std::min(width, enter_limit);
            for (std::size_t j = 0; j < limit; ++j) {
                if (basic[j] || reduced[j].sign() >= 0) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (enter == width || reduced[j] < reduced[enter]) enter = j;
            }
            if (enter == width) return true;

            std::size_t leave = rows_;
            Rational best_ratio;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (tableau_[i][enter].sign() <= 0) continue;
                Rational ratio = rhs_[i] / tableau_[i][enter];
                if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = std::move(ratio);
                }
            }
            if (leave == rows_) return false;

            if (best_ratio.sign() == 0) {
                if (++degenerate_streak >= bland_switch_streak) bland = true;
            } else {
                degenerate_streak = 0;
            }
            pivot(leave, enter, width, reduced);
            basic[basis_[leave]] = false;
            basic[enter] = true;
            basis_[leave] = enter;
        }
    }

    static const Rational& cost_of(const RVector& cost, std::size_t var)
    {
        static const Rational zero(0);
        return var < cost.size() ? cost[var] : zero;
    }

    void pivot(std::size_t row, std::size_t col, std::size_t width, RVector& reduced)
    {
        ++pivots_;
        auto& prow = tableau_[row];
        const Rational inv = 1 / prow[col];
        std::vector<std::size_t> support;
        for (std::size_t j = 0; j < width; ++j) {
            if (!is_zero(prow[j])) {
                prow[j] *= inv;
                support.push_back(j);
            }
        }
        rhs_[row] *= inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row || is_zero(tableau_[i][col])) continue;
            const Rational f = tableau_[i][col];
            for (auto j : support) tableau_[i][j] -= f * prow[j];
            if (!is_zero(rhs_[row])) rhs_[i] -= f * rhs_[row];
        }
        if (!is_zero(reduced[col])) {
            const Rational f = reduced[col];
            for (auto j : support) reduced[j] -= f * prow[j];
        }
    }

    void drive_out_artificials()
    {
        const std::size_t width = cols_ + rows_;
        RVector dummy(width, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < cols_) continue;
            std::vector<bool> basic(width, false);
            for (auto b : basis_) basic[b] = true;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!basic[j] && !is_zero(tableau_[i][j])) {
                    pivot(i, j, width, dummy);
                    basis_[i] = j;
                    break;
                }
            }
            // A row with no original nonzero is redundant; its artificial stays
            // basic at level zero and no later pivot can touch it.
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<int> sign_;
    exact::Matrix tableau_;
    RVector rhs_;
    std::vector<std::size_t> basis_;
    RVector farkas_;
    bool phase_one_done_ = false;
    bool feasible_ = false;
    std::size_t pivots_ = 0;
};

} // namespace corrgeo

#endif
