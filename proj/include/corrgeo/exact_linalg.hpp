#ifndef CORRGEO_EXACT_LINALG_HPP
#define CORRGEO_EXACT_LINALG_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "corrgeo/rational.hpp"

namespace corrgeo::exact {

/// Row-major dense rational matrix.
using Matrix = std::vector<RVector>;

struct Echelon {
    Matrix reduced;                   // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;  // pivot column of each row of `reduced`
    std::vector<std::size_t> row_origin; // original index of the row that supplied each pivot
};

/// Gauss-Jordan elimination. Row choice is first-nonzero so the result is
/// deterministic for a given input order.
inline Echelon row_reduce(Matrix m, std::size_t cols)
{
    Echelon out;
    std::vector<std::size_t> origin(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) origin[i] = i;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && is_zero(m[sel][col])) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[row], m[sel]);
        std::swap(origin[row], origin[sel]);
        const Rational inv = 1 / m[row][col];
        for (std::size_t j = col; j < cols; ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == row || is_zero(m[i][col])) continue;
            const Rational f = m[i][col];
            for (std::size_t j = col; j < cols; ++j) {
                if (!is_zero(m[row][j])) m[i][j] -= f * m[row][j];
            }
        }
        out.pivots.push_back(col);
        out.row_origin.push_back(origin[row]);
        ++row;
    }
    m.resize(row);
    out.reduced = std::move(m);
    return out;
}

inline std::size_t rank(const Matrix& m, std::size_t cols)
{
    return row_reduce(m, cols).pivots.size();
}

/// Basis of {x : m x = 0}, one vector per free column.
inline Matrix null_space(const Matrix& m, std::size_t cols)
{
    const Echelon e = row_reduce(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    Matrix basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        RVector v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of m x = rhs, or nullopt when the system is inconsistent.
inline std::optional<RVector> solve_particular(const Matrix& m, const RVector& rhs, std::size_t cols)
{
    Matrix aug = m;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
    const Echelon e = row_reduce(std::move(aug), cols + 1);
    RVector x(cols, Rational(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == cols) return std::nullopt;
        x[e.pivots[r]] = e.reduced[r][cols];
    }
    return x;
}

} // namespace corrgeo::exact

#endif
