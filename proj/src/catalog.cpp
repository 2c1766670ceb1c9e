#include "heckelab/catalog.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "heckelab/errors.hpp"
#include "heckelab/qseries.hpp"

namespace heckelab {

namespace {

std::string fmt(const ZZ& z) { return z.get_str(); }

bool is_prime_i64(std::int64_t n) {
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

}  // namespace

std::int64_t eta_prefactor(const EtaQuotient& recipe) {
    std::int64_t weighted = 0;
    for (const auto& [d, r] : recipe.factors)
        weighted += d * r;
    if (weighted <= 0 || weighted % 24 != 0)
        throw std::invalid_argument(
            "eta quotient: sum of scale*exponent must be a positive multiple of 24");
    return weighted / 24;
}

void validate(const FormSpec& spec) {
    if (spec.label.empty())
        throw std::invalid_argument("form spec: empty label");
    if (spec.weight < 2 || spec.weight % 2 != 0)
        throw std::invalid_argument("form spec: weight must be an even integer >= 2");
    if (spec.level < 1)
        throw std::invalid_argument("form spec: level must be >= 1");
    if (const auto* eta = std::get_if<EtaQuotient>(&spec.recipe)) {
        if (eta->factors.empty())
            throw std::invalid_argument("eta quotient: no factors");
        int exponent_sum = 0;
        for (const auto& [d, r] : eta->factors) {
            if (d < 1)
                throw std::invalid_argument("eta quotient: scales must be >= 1");
            if (r == 0)
                throw std::invalid_argument("eta quotient: zero exponent factor");
            if (spec.level % d != 0)
                throw std::invalid_argument("eta quotient: scale " + std::to_string(d) +
                                            " does not divide level " +
                                            std::to_string(spec.level));
            exponent_sum += r;
        }
        if (exponent_sum != 2 * spec.weight)
            throw std::invalid_argument(
                "eta quotient: weight must equal half the exponent sum");
        eta_prefactor(*eta);  // throws unless t is a positive integer
    } else if (const auto* dt = std::get_if<DeltaTimes>(&spec.recipe)) {
        if (dt->e4 < 0 || dt->e6 < 0)
            throw std::invalid_argument("Delta recipe: Eisenstein exponents must be >= 0");
        if (spec.weight != 12 + 4 * dt->e4 + 6 * dt->e6)
            throw std::invalid_argument("Delta recipe: weight must be 12 + 4*e4 + 6*e6");
    }
}

EigenvalueTable::EigenvalueTable(FormSpec spec, std::vector<ZZ> coeffs)
    : spec_(std::move(spec)), a_(std::move(coeffs)) {
    if (a_.empty())
        throw std::invalid_argument("eigenvalue table: empty coefficient list");
}

const ZZ& EigenvalueTable::a(std::int64_t n) const {
    if (n < 1 || n > n_max())
        throw std::out_of_range("eigenvalue table: index " + std::to_string(n) +
                                " outside [1, " + std::to_string(n_max()) + "]");
    return a_[static_cast<std::size_t>(n - 1)];
}

EigenvalueTable EigenvalueTable::with_spec(FormSpec s) const {
    if (s.label != spec_.label || s.weight != spec_.weight || s.level != spec_.level)
        throw std::invalid_argument("with_spec: label/weight/level must agree");
    EigenvalueTable out(std::move(s), a_);
    out.audited_bound_ = audited_bound_;
    return out;
}

AuditReport audit_hecke(EigenvalueTable& table, std::int64_t bound) {
    if (bound < 1 || bound > table.n_max())
        throw std::invalid_argument("audit_hecke: bound outside [1, n_max]");

    AuditReport report;
    auto fail = [&report](AuditViolation kind, std::int64_t i, std::int64_t j,
                          std::string detail) {
        report.pass = false;
        report.kind = kind;
        report.i = i;
        report.j = j;
        report.detail = std::move(detail);
    };

    if (table.a(1) != 1) {
        fail(AuditViolation::leading_coefficient, 1, 0,
             "a(1) = " + fmt(table.a(1)) + ", expected 1");
        return report;
    }

    // Coprime multiplicativity: a(m*n) == a(m)*a(n). Scanning m <= n with
    // m*n <= bound costs ~bound*log(bound) exact multiplications.
    for (std::int64_t m = 2; m * m <= bound; ++m) {
        for (std::int64_t n = m + 1; m * n <= bound; ++n) {
            if (std::gcd(m, n) != 1)
                continue;
            if (table.a(m * n) != table.a(m) * table.a(n)) {
                fail(AuditViolation::multiplicativity, m, n,
                     "multiplicativity violated at (m,n)=(" + std::to_string(m) + "," +
                         std::to_string(n) + "): a(" + std::to_string(m * n) + ") = " +
                         fmt(table.a(m * n)) + " but a(m)*a(n) = " +
                         fmt(table.a(m) * table.a(n)));
                return report;
            }
        }
    }

    const int k = table.weight();
    for (std::int64_t p = 2; p <= bound; ++p) {
        if (!is_prime_i64(p))
            continue;
        const bool good = table.level() % p != 0;
        if (!good)
            continue;  // U_p eigenvalues follow different rules; skip bad primes
        const ZZ& ap = table.a(p);
        const ZZ pk1 = zz_pow(p, static_cast<unsigned long>(k - 1));
        if (ap * ap > 4 * pk1) {
            fail(AuditViolation::deligne_bound, p, 0,
                 "a(" + std::to_string(p) + ")^2 = " + fmt(ap * ap) + " exceeds 4p^(k-1) = " +
                     fmt(4 * pk1));
            return report;
        }
        // a(p^m) = a(p) a(p^{m-1}) - p^{k-1} a(p^{m-2}) for p^m within bound.
        ZZ prev = 1, cur = ap;
        for (std::int64_t pm = p * p, m = 2; pm <= bound; pm *= p, ++m) {
            ZZ next = ap * cur - pk1 * prev;
            if (table.a(pm) != next) {
                fail(AuditViolation::prime_power_recurrence, p, m,
                     "recurrence violated at (p,m)=(" + std::to_string(p) + "," +
                         std::to_string(m) + "): a(" + std::to_string(pm) + ") = " +
                         fmt(table.a(pm)) + ", recurrence gives " + fmt(next));
                return report;
            }
            prev = std::move(cur);
            cur = std::move(next);
            if (pm > bound / p)
                break;  // pm * p would overflow past bound anyway
        }
    }

    table.audited_bound_ = std::max(table.audited_bound_, bound);
    return report;
}

std::vector<FormSpec> builtin_catalog() {
    std::vector<FormSpec> forms;
    auto level1 = [&forms](std::string label, int weight, int e4, int e6) {
        forms.push_back({std::move(label), weight, 1, DeltaTimes{e4, e6}, false, ""});
        forms.back().twist_class = forms.back().label;
    };
    auto eta = [&forms](std::string label, std::int64_t level,
                        std::vector<std::pair<std::int64_t, int>> factors, bool cm) {
        forms.push_back({std::move(label), 2, level, EtaQuotient{std::move(factors)}, cm, ""});
        forms.back().twist_class = forms.back().label;
    };

    level1("1.12.delta", 12, 0, 0);
    level1("1.16.delta-e4", 16, 1, 0);
    level1("1.18.delta-e6", 18, 0, 1);
    level1("1.20.delta-e4sq", 20, 2, 0);
    level1("1.22.delta-e4e6", 22, 1, 1);
    level1("1.26.delta-e4sqe6", 26, 2, 1);

    eta("11.2.eta", 11, {{1, 2}, {11, 2}}, false);
    eta("14.2.eta", 14, {{1, 1}, {2, 1}, {7, 1}, {14, 1}}, false);
    eta("15.2.eta", 15, {{1, 1}, {3, 1}, {5, 1}, {15, 1}}, false);
    eta("20.2.eta", 20, {{2, 2}, {10, 2}}, false);
    eta("24.2.eta", 24, {{2, 1}, {4, 1}, {6, 1}, {12, 1}}, false);
    eta("27.2.eta", 27, {{3, 2}, {9, 2}}, true);
    eta("32.2.eta", 32, {{4, 2}, {8, 2}}, true);
    eta("36.2.eta", 36, {{6, 4}}, true);

    for (const auto& f : forms)
        validate(f);
    return forms;
}

FormSpec find_form(const std::string& label) {
    for (auto& f : builtin_catalog())
        if (f.label == label)
            return f;
    throw std::invalid_argument("unknown form label: " + label);
}

namespace {

// Coefficients of the eta-quotient product (without the q^t prefactor),
// truncated at order m.
QSeries eta_product(const EtaQuotient& recipe, std::int64_t m) {
    QSeries acc = QSeries::one(m);
    for (const auto& [d, r] : recipe.factors) {
        if (r < 0)
            throw std::invalid_argument(
                "eta quotient: negative exponents are not supported");
        const QSeries factor = eta_factor(m, d);
        for (int i = 0; i < r; ++i)
            acc = mul(acc, factor);  // sparse outer loop each step
    }
    return acc;
}

}  // namespace

EigenvalueTable expand(const FormSpec& spec, std::int64_t n_max, std::int64_t audit_bound) {
    validate(spec);
    if (n_max < 1)
        throw std::invalid_argument("expand: n_max must be >= 1");
    if (audit_bound == 0)
        audit_bound = kDefaultAuditBound;
    audit_bound = std::min(audit_bound, n_max);

    std::vector<ZZ> a(static_cast<std::size_t>(n_max));  // a[i] = a(i+1)
    if (const auto* eta = std::get_if<EtaQuotient>(&spec.recipe)) {
        const std::int64_t t = eta_prefactor(*eta);
        if (n_max < t)
            throw std::invalid_argument("expand: n_max below the q-power prefactor " +
                                        std::to_string(t));
        const QSeries prod = eta_product(*eta, n_max - t);
        for (std::int64_t n = t; n <= n_max; ++n)
            a[static_cast<std::size_t>(n - 1)] = prod[n - t];
    } else if (const auto* dt = std::get_if<DeltaTimes>(&spec.recipe)) {
        const std::int64_t m = n_max - 1;  // Delta = q * eta_factor^24
        QSeries prod = pow(eta_factor(m), 24);
        for (int i = 0; i < dt->e4; ++i)
            prod = mul(prod, eisenstein(4, m));
        for (int i = 0; i < dt->e6; ++i)
            prod = mul(prod, eisenstein(6, m));
        for (std::int64_t n = 1; n <= n_max; ++n)
            a[static_cast<std::size_t>(n - 1)] = prod[n - 1];
    } else {
        throw std::invalid_argument("expand: external tables have no recipe to expand");
    }

    EigenvalueTable table(spec, std::move(a));
    if (AuditReport report = audit_hecke(table, audit_bound); !report.pass)
        throw audit_error("expansion of " + spec.label +
                          " failed its own audit: " + report.detail);
    return table;
}

std::int64_t elliptic_ap(std::int64_t p) {
    if (!is_prime_i64(p))
        throw std::invalid_argument("elliptic_ap: argument must be prime");
    if (p == 11)
        throw std::invalid_argument("elliptic_ap: p = 11 is a prime of bad reduction");

    // #E(F_p) for y^2 + y = x^3 - x^2 - 10x - 20: tally how often each value
    // of y^2 + y occurs, then look up the cubic's value for every x. Same
    // count as the naive two-variable point loop, one pass per variable.
    std::vector<std::int64_t> hits(static_cast<std::size_t>(p), 0);
    for (std::int64_t y = 0; y < p; ++y)
        ++hits[static_cast<std::size_t>((y * y + y) % p)];
    auto mod_p = [p](std::int64_t v) { return ((v % p) + p) % p; };
    std::int64_t affine = 0;
    for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t x2 = mod_p(x * x);
        const std::int64_t rhs = mod_p(mod_p(x2 * x) - x2 - mod_p(10 * x) - 20);
        affine += hits[static_cast<std::size_t>(rhs)];
    }
    return p + 1 - (affine + 1);  // +1 for the point at infinity
}

}  // namespace heckelab
