#include "heckelab/hecke.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace heckelab {

namespace {

constexpr mpfr_prec_t kPrec = 320;  // bits; leaves ~80 guard digits over double

void require_even_weight(int k, const char* who) {
    if (k < 2 || k % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": weight must be an even integer >= 2");
}

// num / sqrt(den) with one final rounding to double.
double div_by_sqrt(const ZZ& num, const ZZ& den) {
    mpfr_t x, d;
    mpfr_init2(x, kPrec);
    mpfr_init2(d, kPrec);
    mpfr_set_z(x, num.get_mpz_t(), MPFR_RNDN);
    mpfr_set_z(d, den.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(d, d, MPFR_RNDN);
    mpfr_div(x, x, d, MPFR_RNDN);
    const double out = mpfr_get_d(x, MPFR_RNDN);
    mpfr_clear(x);
    mpfr_clear(d);
    return out;
}

Ordering order_of(int cmp) {
    if (cmp < 0)
        return Ordering::less;
    if (cmp > 0)
        return Ordering::greater;
    return Ordering::equal;
}

}  // namespace

double normalized_value(const ZZ& a_p, std::int64_t p, int k) {
    require_even_weight(k, "normalized_value");
    if (a_p == 0)
        return 0.0;
    return div_by_sqrt(a_p, zz_pow(p, static_cast<unsigned long>(k - 1)));
}

Ordering dominance_compare(const ZZ& aF, int kF, const ZZ& aG, int kG, std::int64_t p) {
    require_even_weight(kF, "dominance_compare");
    require_even_weight(kG, "dominance_compare");
    // lambda_F vs lambda_G  <=>  aF * p^{(kG-kF)/2} vs aG  when kG >= kF.
    // Even weights guarantee the half-difference is an integer.
    if (kG >= kF) {
        const ZZ lhs = aF * zz_pow(p, static_cast<unsigned long>((kG - kF) / 2));
        return order_of(cmp(lhs, aG));
    }
    const ZZ rhs = aG * zz_pow(p, static_cast<unsigned long>((kF - kG) / 2));
    return order_of(cmp(aF, rhs));
}

Ordering square_dominance_compare(const ZZ& aF, int kF, const ZZ& aG, int kG, std::int64_t p) {
    require_even_weight(kF, "square_dominance_compare");
    require_even_weight(kG, "square_dominance_compare");
    if (kG >= kF) {
        const ZZ lhs = aF * aF * zz_pow(p, static_cast<unsigned long>(kG - kF));
        return order_of(cmp(lhs, aG * aG));
    }
    const ZZ rhs = aG * aG * zz_pow(p, static_cast<unsigned long>(kF - kG));
    return order_of(cmp(aF * aF, rhs));
}

double IntPolynomial::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * x + it->get_d();
    return acc;
}

IntPolynomial chebyshev_P(int m) {
    if (m < 0)
        throw std::invalid_argument("chebyshev_P: degree must be >= 0");
    IntPolynomial prev{{ZZ(1)}};  // P_0
    if (m == 0)
        return prev;
    IntPolynomial cur{{ZZ(0), ZZ(1)}};  // P_1 = x
    for (int i = 2; i <= m; ++i) {
        // next = x*cur - prev
        IntPolynomial next;
        next.coeffs.assign(cur.coeffs.size() + 1, ZZ(0));
        for (std::size_t j = 0; j < cur.coeffs.size(); ++j)
            next.coeffs[j + 1] = cur.coeffs[j];
        for (std::size_t j = 0; j < prev.coeffs.size(); ++j)
            next.coeffs[j] -= prev.coeffs[j];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

ZZ a_prime_power(const ZZ& a_p, std::int64_t p, int k, std::int64_t level, int m) {
    require_even_weight(k, "a_prime_power");
    if (m < 0)
        throw std::invalid_argument("a_prime_power: exponent must be >= 0");
    if (level % p == 0)
        throw std::invalid_argument("a_prime_power: recurrence invalid at primes dividing the level");
    ZZ prev = 1;  // A_0
    if (m == 0)
        return prev;
    ZZ cur = a_p;  // A_1
    const ZZ pk1 = zz_pow(p, static_cast<unsigned long>(k - 1));
    for (int i = 2; i <= m; ++i) {
        ZZ next = a_p * cur - pk1 * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

double sym_power_lambda(const ZZ& a_p, std::int64_t p, int k, std::int64_t level, int m) {
    const ZZ num = a_prime_power(a_p, p, k, level, m);
    if (num == 0)
        return 0.0;
    // Denominator p^{m(k-1)/2} handled as sqrt(p^{m(k-1)}): m odd makes the
    // exponent half-integral, so the square-root path covers both parities.
    return div_by_sqrt(num, zz_pow(p, static_cast<unsigned long>(m) *
                                          static_cast<unsigned long>(k - 1)));
}

SatoTateSample satake_angle(double lambda) {
    if (!(std::abs(lambda) <= 2.0))
        throw std::domain_error("satake_angle: |lambda| > 2 violates the Deligne bound");
    SatoTateSample s;
    s.lambda = lambda;
    s.theta = std::acos(lambda / 2.0);
    return s;
}

}  // namespace heckelab
