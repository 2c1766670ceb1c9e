#include "heckelab/qseries.hpp"

#include <stdexcept>
#include <utility>

namespace heckelab {

QSeries::QSeries(std::int64_t n_max) {
    if (n_max < 0) throw std::invalid_argument("QSeries: n_max must be >= 0");
    c_.resize(static_cast<std::size_t>(n_max) + 1);
}

QSeries QSeries::one(std::int64_t n_max) {
    QSeries s(n_max);
    s.c_[0] = 1;
    return s;
}

std::int64_t QSeries::nonzero_count() const {
    std::int64_t n = 0;
    for (const ZZ& v : c_)
        if (v != 0) ++n;
    return n;
}

QSeries eta_factor(std::int64_t n_max, std::int64_t scale) {
    if (scale < 1) throw std::invalid_argument("eta_factor: scale must be >= 1");
    QSeries s(n_max);
    s[0] = 1;
    // generalized pentagonal exponents k(3k-1)/2 for k = 1, -1, 2, -2, ...
    for (std::int64_t k = 1;; ++k) {
        bool any = false;
        for (std::int64_t kk : {k, -k}) {
            std::int64_t e = scale * (kk * (3 * kk - 1) / 2);
            if (e <= n_max) {
                s[e] += (k % 2 != 0) ? -1 : 1;
                any = true;
            }
        }
        if (!any) break;
    }
    return s;
}

QSeries mul(const QSeries& a, const QSeries& b) {
    if (a.n_max() != b.n_max())
        throw std::invalid_argument("mul: mismatched truncation orders");
    const std::int64_t n = a.n_max();

    // outer loop over the operand with fewer nonzero terms
    const bool a_outer = a.nonzero_count() <= b.nonzero_count();
    const QSeries& u = a_outer ? a : b;
    const QSeries& v = a_outer ? b : a;

    QSeries out(n);
    for (std::int64_t i = 0; i <= n; ++i) {
        const ZZ& ui = u[i];
        if (ui == 0) continue;
        mpz_srcptr uip = ui.get_mpz_t();
        const bool is_one = mpz_cmp_si(uip, 1) == 0;
        const bool is_neg_one = mpz_cmp_si(uip, -1) == 0;
        for (std::int64_t j = 0; j + i <= n; ++j) {
            const ZZ& vj = v[j];
            if (vj == 0) continue;
            mpz_ptr o = out[i + j].get_mpz_t();
            if (is_one)
                mpz_add(o, o, vj.get_mpz_t());
            else if (is_neg_one)
                mpz_sub(o, o, vj.get_mpz_t());
            else
                mpz_addmul(o, uip, vj.get_mpz_t());
        }
    }
    return out;
}

QSeries pow(const QSeries& a, std::int64_t e) {
    if (e < 0) throw std::invalid_argument("pow: exponent must be >= 0");
    QSeries r = QSeries::one(a.n_max());
    for (std::int64_t i = 0; i < e; ++i) r = mul(r, a);
    return r;
}

ZZ sigma(std::int64_t n, int k) {
    if (n < 1) throw std::invalid_argument("sigma: n must be >= 1");
    ZZ s = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        s += zz_pow(d, static_cast<unsigned long>(k));
        const std::int64_t q = n / d;
        if (q != d) s += zz_pow(q, static_cast<unsigned long>(k));
    }
    return s;
}

QSeries eisenstein(int k, std::int64_t n_max) {
    if (k != 4 && k != 6) throw std::invalid_argument("eisenstein: k must be 4 or 6");
    const int power = (k == 4) ? 3 : 5;
    const long factor = (k == 4) ? 240 : -504;

    // divisor-power sums by sieving: s[m] += d^power for every multiple m of d
    std::vector<ZZ> s(static_cast<std::size_t>(n_max) + 1);
    for (std::int64_t d = 1; d <= n_max; ++d) {
        const ZZ dk = zz_pow(d, static_cast<unsigned long>(power));
        for (std::int64_t m = d; m <= n_max; m += d)
            s[static_cast<std::size_t>(m)] += dk;
    }

    QSeries e(n_max);
    e[0] = 1;
    for (std::int64_t i = 1; i <= n_max; ++i)
        e[i] = factor * s[static_cast<std::size_t>(i)];
    return e;
}

}  // namespace heckelab
