#pragma once

#include <cstdint>
#include <vector>

#include "heckelab/bigint.hpp"

namespace heckelab {

/// Result of an exact three-way comparison between normalized eigenvalues.
enum class Ordering { less, equal, greater };

/// lambda_f(p) = a_p / p^{(k-1)/2}, kept exact; render numerically on demand.
struct NormalizedEigenvalue {
    ZZ a_p;
    std::int64_t p = 0;
    int weight = 0;
};

/// Floating approximation of a_p / p^{(k-1)/2}. Computed through 320-bit
/// intermediates and rounded once, so the returned double is the nearest
/// representable value. Requires k even, k >= 2.
double normalized_value(const ZZ& a_p, std::int64_t p, int k);

/// Exact ordering of lambda_F(p) vs lambda_G(p). Both weights must be even,
/// which makes the scaling power p^{|kG-kF|/2} an integer: the comparison is
/// done on arbitrary-precision integers, never floating point. Near-ties
/// (quadratic twists, equal forms) are decided exactly.
Ordering dominance_compare(const ZZ& aF, int kF, const ZZ& aG, int kG, std::int64_t p);

/// Exact ordering of lambda_F(p)^2 vs lambda_G(p)^2 via
/// aF^2 * p^{kG-kF} vs aG^2 (swap-normalized so the power is nonnegative).
Ordering square_dominance_compare(const ZZ& aF, int kF, const ZZ& aG, int kG, std::int64_t p);

/// Univariate polynomial with arbitrary-precision integer coefficients,
/// ascending degree. Zero polynomial is the empty/[0] coefficient vector.
struct IntPolynomial {
    std::vector<ZZ> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double eval(double x) const;  // Horner
    bool operator==(const IntPolynomial&) const = default;
};

/// P_0 = 1, P_1 = x, P_m = x*P_{m-1} - P_{m-2}. These satisfy
/// P_m(2 cos t) = sin((m+1)t)/sin(t) (Chebyshev U_m at x/2) and encode
/// prime-power eigenvalues: lambda_f(p^m) = P_m(lambda_f(p)).
IntPolynomial chebyshev_P(int m);

/// a_f(p^m) from a_f(p) by the integer Hecke recurrence
/// A_0 = 1, A_1 = a_p, A_m = a_p*A_{m-1} - p^{k-1}*A_{m-2}.
/// Valid only at good primes; throws if p divides the level.
ZZ a_prime_power(const ZZ& a_p, std::int64_t p, int k, std::int64_t level, int m);

/// lambda_f(p^m) = a_f(p^m) / p^{m(k-1)/2} as a double (320-bit path, one
/// rounding). Equals chebyshev_P(m) evaluated at lambda_f(p).
double sym_power_lambda(const ZZ& a_p, std::int64_t p, int k, std::int64_t level, int m);

/// Angle representation of a normalized eigenvalue: lambda = 2 cos(theta),
/// theta in [0, pi]. The Satake parameters are e^{+-i theta}.
struct SatoTateSample {
    double theta = 0.0;
    double lambda = 0.0;
};

/// theta = arccos(lambda/2). Requires |lambda| <= 2 (anything larger means a
/// Deligne-bound violation upstream and is refused).
SatoTateSample satake_angle(double lambda);

}  // namespace heckelab
