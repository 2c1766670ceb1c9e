#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace heckelab {

/// Neumaier-compensated accumulator. Sums near s = 1 run over ~10^5 terms;
/// the compensation keeps results deterministic and accurate to ~1e-16
/// relative regardless of term count.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// All primes <= limit, ascending.
struct PrimeSieve {
    std::int64_t limit = 0;
    std::vector<std::int64_t> primes;
};

/// Sieve of Eratosthenes; x >= 2.
PrimeSieve sieve(std::int64_t x);

/// sum_{p <= x} w(p) * p^{-s}, terms added in ascending prime order with
/// compensated accumulation. Requires s > 1 and x <= ps.limit.
double dirichlet_sum(const PrimeSieve& ps, const std::function<double(std::int64_t)>& w,
                     double s, std::int64_t x);

/// Finite-truncation proxy for the analytic density of a prime set:
/// value = (sum_{p in A, p <= x} p^{-s}) / (sum_{p <= x} p^{-s}).
/// The true density is the s -> 1+ limit; this reports one grid point of it.
struct DensityEstimate {
    double s = 0.0;
    std::int64_t x = 0;
    double numerator = 0.0;
    double denominator = 0.0;
    double value = 0.0;
};

DensityEstimate analytic_density_proxy(const PrimeSieve& ps,
                                       const std::function<bool(std::int64_t)>& member,
                                       double s, std::int64_t x);

/// #{p in A, p <= x} / pi(x).
double natural_density(const PrimeSieve& ps, const std::function<bool(std::int64_t)>& member,
                       std::int64_t x);

}  // namespace heckelab
