#ifndef CORRGEO_DOUBLE_DESCRIPTION_HPP
#define CORRGEO_DOUBLE_DESCRIPTION_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "corrgeo/error.hpp"
#include "corrgeo/exact_linalg.hpp"
#include "corrgeo/rational.hpp"

namespace corrgeo {

/// Fixed-width bitset sized at runtime; used for constraint incidence sets.
class IncidenceSet {
public:
    IncidenceSet() = default;
    explicit IncidenceSet(std::size_t bits) : words_((bits + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

    std::size_t count() const
    {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    IncidenceSet operator&(const IncidenceSet& other) const
    {
        IncidenceSet out = *this;
        for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= other.words_[i];
        return out;
    }

    bool contains(const IncidenceSet& subset) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if ((subset.words_[i] & ~words_[i]) != 0) return false;
        }
        return true;
    }

    bool operator==(const IncidenceSet&) const = default;

private:
    std::vector<std::uint64_t> words_;
};

struct ConeRay {
    RVector direction;    // primitive integer vector
    IncidenceSet tight;   // constraint rows with row . direction == 0
};

/// Extreme rays of the pointed cone {h : rows[i] . h >= 0 for all i} by the
/// double description method with the combinatorial adjacency test.
///
/// Requires the rows to span the ambient space (otherwise the cone has a
/// lineality space and is not pointed). Output rays are primitive integer
/// vectors sorted lexicographically.
inline std::vector<ConeRay> extreme_rays(const exact::Matrix& rows, std::size_t dim)
{
    const std::size_t m = rows.size();
    if (dim == 0) return {};

    // Greedy choice of `dim` independent rows seeds the cone as a simplicial one.
    std::vector<std::size_t> seed;
    {
        exact::Matrix chosen;
        for (std::size_t i = 0; i < m && seed.size() < dim; ++i) {
            chosen.push_back(rows[i]);
            if (exact::rank(chosen, dim) == chosen.size()) {
                seed.push_back(i);
            } else {
                chosen.pop_back();
            }
        }
    }
    if (seed.size() < dim) fail(ErrorKind::DimensionMismatch, "constraint rows do not span the space; cone is not pointed");

    std::vector<ConeRay> rays;
    {
        // Columns of the inverse of the seed matrix.
        exact::Matrix aug;
        for (std::size_t k = 0; k < dim; ++k) {
            RVector r = rows[seed[k]];
            r.resize(2 * dim, Rational(0));
            r[dim + k] = 1;
            aug.push_back(std::move(r));
        }
        const exact::Echelon e = exact::row_reduce(std::move(aug), 2 * dim);
        for (std::size_t k = 0; k < dim; ++k) {
            RVector col(dim);
            for (std::size_t i = 0; i < dim; ++i) col[i] = e.reduced[i][dim + k];
            ConeRay ray{to_primitive_integers(col), IncidenceSet(m)};
            for (std::size_t j = 0; j < dim; ++j) {
                if (j != k) ray.tight.set(seed[j]);
            }
            rays.push_back(std::move(ray));
        }
    }

    std::vector<bool> is_seed(m, false);
    for (auto s : seed) is_seed[s] = true;

    for (std::size_t row = 0; row < m; ++row) {
        if (is_seed[row]) continue;
        const RVector& a = rows[row];
        std::vector<Rational> value(rays.size());
        std::vector<std::size_t> pos, neg;
        std::vector<ConeRay> next;
        for (std::size_t r = 0; r < rays.size(); ++r) {
            value[r] = dot(a, rays[r].direction);
            const int sign = value[r].sign();
            if (sign > 0) pos.push_back(r);
            if (sign < 0) neg.push_back(r);
            if (sign == 0) rays[r].tight.set(row);
        }
        for (std::size_t r = 0; r < rays.size(); ++r) {
            if (value[r].sign() >= 0) next.push_back(rays[r]);
        }
        for (auto p : pos) {
            for (auto q : neg) {
                const IncidenceSet common = rays[p].tight & rays[q].tight;
                if (dim >= 2 && common.count() < dim - 2) continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == q) continue;
                    if (rays[r].tight.contains(common)) adjacent = false;
                }
                if (!adjacent) continue;
                RVector dir(dim);
                for (std::size_t i = 0; i < dim; ++i) {
                    dir[i] = value[p] * rays[q].direction[i] - value[q] * rays[p].direction[i];
                }
                ConeRay ray{to_primitive_integers(dir), common};
                ray.tight.set(row);
                next.push_back(std::move(ray));
            }
        }
        rays = std::move(next);
    }

    std::sort(rays.begin(), rays.end(), [](const ConeRay& x, const ConeRay& y) { return x.direction < y.direction; });
    return rays;
}

} // namespace corrgeo

#endif
