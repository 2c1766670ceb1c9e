#include "heckelab/density.hpp"

#include <stdexcept>

namespace heckelab {

PrimeSieve sieve(std::int64_t x) {
    if (x < 2)
        throw std::invalid_argument("sieve: bound must be >= 2");
    std::vector<bool> composite(static_cast<std::size_t>(x) + 1, false);
    PrimeSieve ps;
    ps.limit = x;
    for (std::int64_t p = 2; p <= x; ++p) {
        if (composite[static_cast<std::size_t>(p)])
            continue;
        ps.primes.push_back(p);
        for (std::int64_t q = p * p; q <= x; q += p)
            composite[static_cast<std::size_t>(q)] = true;
    }
    return ps;
}

double dirichlet_sum(const PrimeSieve& ps, const std::function<double(std::int64_t)>& w,
                     double s, std::int64_t x) {
    if (!(s > 1.0))
        throw std::invalid_argument("dirichlet_sum: exponent must satisfy s > 1");
    if (x > ps.limit)
        throw std::invalid_argument("dirichlet_sum: bound exceeds sieve limit");
    CompensatedSum acc;
    for (std::int64_t p : ps.primes) {
        if (p > x)
            break;
        acc.add(w(p) * std::pow(static_cast<double>(p), -s));
    }
    return acc.value();
}

DensityEstimate analytic_density_proxy(const PrimeSieve& ps,
                                       const std::function<bool(std::int64_t)>& member,
                                       double s, std::int64_t x) {
    DensityEstimate est;
    est.s = s;
    est.x = x;
    est.numerator =
        dirichlet_sum(ps, [&member](std::int64_t p) { return member(p) ? 1.0 : 0.0; }, s, x);
    est.denominator = dirichlet_sum(ps, [](std::int64_t) { return 1.0; }, s, x);
    est.value = est.numerator / est.denominator;
    return est;
}

double natural_density(const PrimeSieve& ps, const std::function<bool(std::int64_t)>& member,
                       std::int64_t x) {
    if (x > ps.limit)
        throw std::invalid_argument("natural_density: bound exceeds sieve limit");
    std::int64_t in = 0, total = 0;
    for (std::int64_t p : ps.primes) {
        if (p > x)
            break;
        ++total;
        if (member(p))
            ++in;
    }
    if (total == 0)
        throw std::invalid_argument("natural_density: no primes below bound");
    return static_cast<double>(in) / static_cast<double>(total);
}

}  // namespace heckelab
