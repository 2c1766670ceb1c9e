#pragma once

#include <cstdint>
#include <vector>

#include "heckelab/bigint.hpp"

namespace heckelab {

/// Truncated power series 1*a0 + a1 q + ... + a_{n_max} q^{n_max} with exact
/// integer coefficients.
///
/// The truncation order is fixed at construction and never changes silently:
/// binary operations require both operands to share it and throw otherwise.
/// Values are immutable in normal use (operations return fresh series), so
/// sharing across threads is safe.
class QSeries {
public:
    /// Zero series truncated at n_max (n_max >= 0).
    explicit QSeries(std::int64_t n_max);

    /// The constant series 1.
    static QSeries one(std::int64_t n_max);

    std::int64_t n_max() const noexcept { return static_cast<std::int64_t>(c_.size()) - 1; }

    const ZZ& operator[](std::int64_t i) const { return c_.at(static_cast<std::size_t>(i)); }
    ZZ& operator[](std::int64_t i) { return c_.at(static_cast<std::size_t>(i)); }

    const std::vector<ZZ>& coeffs() const noexcept { return c_; }

    std::int64_t nonzero_count() const;

    bool operator==(const QSeries&) const = default;

private:
    std::vector<ZZ> c_;
};

/// prod_{n>=1} (1 - q^{scale*n}) truncated at n_max, by the pentagonal-number
/// theorem: sum_k (-1)^k q^{scale*k(3k-1)/2} over all integers k. All
/// coefficients are in {-1, 0, 1}.
QSeries eta_factor(std::int64_t n_max, std::int64_t scale = 1);

/// Truncated Cauchy product. The operand with fewer nonzero terms drives the
/// outer loop, so sparse-times-dense costs O(nnz * n_max); for the pentagonal
/// series that is O(n_max^{3/2}). Throws on mismatched truncation orders.
QSeries mul(const QSeries& a, const QSeries& b);

/// a^e by repeatedly multiplying the running product by a (e >= 0). For a
/// sparse base such as an eta factor each step takes the sparse path, which is
/// how eta powers stay tractable at large truncation orders.
QSeries pow(const QSeries& a, std::int64_t e);

inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }

/// Divisor power sum sum_{d|n} d^k for n >= 1.
ZZ sigma(std::int64_t n, int k);

/// Normalized Eisenstein series: E4 = 1 + 240 sum sigma_3(n) q^n,
/// E6 = 1 - 504 sum sigma_5(n) q^n. Only k in {4, 6} is supported.
QSeries eisenstein(int k, std::int64_t n_max);

}  // namespace heckelab
