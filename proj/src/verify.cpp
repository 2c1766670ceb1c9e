#include "heckelab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "heckelab/errors.hpp"
#include "heckelab/hecke.hpp"

namespace heckelab {

namespace {

std::int64_t check_bound(const EigenvalueTable& f, const EigenvalueTable& g,
                         std::int64_t x, const char* who) {
    const std::int64_t cap = std::min(f.n_max(), g.n_max());
    if (x < 2)
        throw std::invalid_argument(std::string(who) + ": prime bound must be >= 2");
    if (x > cap)
        throw std::invalid_argument(std::string(who) + ": bound " + std::to_string(x) +
                                    " exceeds the tables (min n_max = " +
                                    std::to_string(cap) + ")");
    return x;
}

}  // namespace

void check_squared_hypotheses(const EigenvalueTable& f, const EigenvalueTable& g,
                              std::int64_t x) {
    const TwistReport tw = twist_detect(f, g, x);
    if (tw.status == TwistStatus::twist_equivalent)
        throw hypothesis_error("squared mode requires forms that are not quadratic twists "
                               "of each other; |lambda| agrees at every good prime <= " +
                               std::to_string(x) + " for (" + f.label() + ", " + g.label() +
                               ")");
    for (const EigenvalueTable* t : {&f, &g}) {
        const CmReport cm = cm_detect(*t, x);
        if (cm.status == CmStatus::cm)
            throw hypothesis_error(
                "squared mode requires forms without complex multiplication; " +
                t->label() + " has a(p) = 0 at " + std::to_string(cm.zero_count) + "/" +
                std::to_string(cm.good_count) + " good primes <= " + std::to_string(x));
    }
}

PrimePartition partition(const EigenvalueTable& f, const EigenvalueTable& g,
                         std::int64_t x, bool squared) {
    check_bound(f, g, x, "partition");
    PrimePartition part;
    part.f_label = f.label();
    part.g_label = g.label();
    part.x = x;
    part.squared = squared;

    const std::int64_t bad_levels = f.level() * g.level();
    for (std::int64_t p : sieve(x).primes) {
        if (bad_levels % p == 0) {
            part.excluded.push_back(p);
            continue;
        }
        const Ordering ord =
            squared ? square_dominance_compare(f.a(p), f.weight(), g.a(p), g.weight(), p)
                    : dominance_compare(f.a(p), f.weight(), g.a(p), g.weight(), p);
        if (ord == Ordering::less)
            part.F.push_back(p);
        else if (ord == Ordering::greater)
            part.Fprime.push_back(p);
        else
            part.E.push_back(p);
    }
    return part;
}

MomentReport moment_report(const EigenvalueTable& f, const EigenvalueTable& g, double s,
                           std::int64_t x) {
    check_bound(f, g, x, "moment_report");
    if (!(s > 1.0))
        throw std::invalid_argument("moment_report: Dirichlet exponent must satisfy s > 1");

    MomentReport rep;
    rep.f_label = f.label();
    rep.g_label = g.label();
    rep.s = s;
    rep.x = x;
    rep.square_identity_ok = true;

    // One compensated accumulator per field per weighting, summed in
    // ascending prime order for determinism.
    CompensatedSum d_one, d_f2, d_g2, d_f4, d_g4, d_fg, d_f2g2, d_diff2, d_sqdiff2;
    CompensatedSum n_f2, n_g2, n_f4, n_g4, n_fg, n_f2g2, n_diff2, n_sqdiff2;

    const std::int64_t bad_levels = f.level() * g.level();
    for (std::int64_t p : sieve(x).primes) {
        if (bad_levels % p == 0)
            continue;
        ++rep.good_primes;

        // Exact cross-check a(p)^2 == p^{k-1} + a(p^2) for both forms,
        // against the stored table whenever p^2 is inside it.
        for (const EigenvalueTable* t : {&f, &g}) {
            const ZZ& ap = t->a(p);
            const ZZ pk1 = zz_pow(p, static_cast<unsigned long>(t->weight() - 1));
            const ZZ ap2 = p * p <= t->n_max()
                               ? t->a(p * p)
                               : a_prime_power(ap, p, t->weight(), t->level(), 2);
            if (ap * ap != pk1 + ap2)
                rep.square_identity_ok = false;
        }

        const double lf = normalized_value(f.a(p), p, f.weight());
        const double lg = normalized_value(g.a(p), p, g.weight());
        const double lf2 = lf * lf, lg2 = lg * lg;
        const double diff = lf - lg, sqdiff = lf2 - lg2;
        const double w = std::pow(static_cast<double>(p), -s);

        d_one.add(w);
        d_f2.add(lf2 * w);
        d_g2.add(lg2 * w);
        d_f4.add(lf2 * lf2 * w);
        d_g4.add(lg2 * lg2 * w);
        d_fg.add(lf * lg * w);
        d_f2g2.add(lf2 * lg2 * w);
        d_diff2.add(diff * diff * w);
        d_sqdiff2.add(sqdiff * sqdiff * w);

        n_f2.add(lf2);
        n_g2.add(lg2);
        n_f4.add(lf2 * lf2);
        n_g4.add(lg2 * lg2);
        n_fg.add(lf * lg);
        n_f2g2.add(lf2 * lg2);
        n_diff2.add(diff * diff);
        n_sqdiff2.add(sqdiff * sqdiff);
    }

    rep.dirichlet = {d_one.value(), d_f2.value(),   d_g2.value(),    d_f4.value(),
                     d_g4.value(),  d_fg.value(),   d_f2g2.value(),  d_diff2.value(),
                     d_sqdiff2.value()};
    rep.natural = {static_cast<double>(rep.good_primes),
                   n_f2.value(),
                   n_g2.value(),
                   n_f4.value(),
                   n_g4.value(),
                   n_fg.value(),
                   n_f2g2.value(),
                   n_diff2.value(),
                   n_sqdiff2.value()};
    return rep;
}

double proposition_ratio(const EigenvalueTable& f, const EigenvalueTable& g, double s,
                         std::int64_t x, bool squared) {
    if (squared)
        check_squared_hypotheses(f, g, x);
    const MomentReport rep = moment_report(f, g, s, x);
    const double lhs = squared ? rep.dirichlet.sqdiff2 : rep.dirichlet.diff2;
    return lhs / rep.dirichlet.one;
}

TheoremAudit theorem_audit(const EigenvalueTable& f, const EigenvalueTable& g, double s,
                           std::int64_t x, bool squared) {
    check_bound(f, g, x, "theorem_audit");
    if (!(s > 1.0))
        throw std::invalid_argument("theorem_audit: Dirichlet exponent must satisfy s > 1");
    if (squared)
        check_squared_hypotheses(f, g, x);

    TheoremAudit audit;
    audit.f_label = f.label();
    audit.g_label = g.label();
    audit.s = s;
    audit.x = x;
    audit.squared = squared;

    const PrimeSieve ps = sieve(x);
    const PrimePartition part = partition(f, g, x, squared);
    audit.good_primes = static_cast<std::int64_t>(part.F.size() + part.Fprime.size() +
                                                  part.E.size());

    const int kF = f.weight(), kG = g.weight();
    const int k_hi = std::max(kF, kG);
    std::unordered_set<std::int64_t> in_F(part.F.begin(), part.F.end());

    CompensatedSum lhs_total, lhs_in, lhs_out, sum_F_w, out_diff;
    const std::int64_t bad_levels = f.level() * g.level();
    for (std::int64_t p : ps.primes) {
        if (bad_levels % p == 0)
            continue;

        // Common scale clears every denominator:
        //   linear:   diff = D  / p^{(k_hi-1)/2}, D  = aF p^{(k_hi-kF)/2} - aG p^{(k_hi-kG)/2}
        //   squared:  diff = D2 / p^{k_hi-1},     D2 = aF^2 p^{k_hi-kF}   - aG^2 p^{k_hi-kG}
        ZZ D;
        if (squared)
            D = f.a(p) * f.a(p) * zz_pow(p, static_cast<unsigned long>(k_hi - kF)) -
                g.a(p) * g.a(p) * zz_pow(p, static_cast<unsigned long>(k_hi - kG));
        else
            D = f.a(p) * zz_pow(p, static_cast<unsigned long>((k_hi - kF) / 2)) -
                g.a(p) * zz_pow(p, static_cast<unsigned long>((k_hi - kG) / 2));
        // scale_sq = (common scale)^2: p^{k_hi-1} linear, p^{2(k_hi-1)} squared.
        const ZZ scale_sq =
            zz_pow(p, static_cast<unsigned long>(squared ? 2 * (k_hi - 1) : k_hi - 1));

        // Cap: diff^2 <= 16 at every good prime (both eigenvalues lie in
        // [-2,2], their squares in [0,4]).
        ++audit.cap_checked;
        const bool cap_ok = D * D <= 16 * scale_sq;
        if (cap_ok)
            ++audit.cap_holds;

        const bool outside_F = in_F.count(p) == 0;
        if (outside_F) {
            // Complement: 0 <= diff there, and diff^2 <= 4*diff. With
            // diff >= 0 that is diff <= 4. Linear mode: D >= 0 and
            // D^2 <= 16 p^{k_hi-1} (the 4*p^{(k_hi-1)/2} bound squared, since
            // the scale is irrational). Squared mode: 0 <= D2 <= 4 p^{k_hi-1}.
            ++audit.comp_checked;
            bool comp_ok = D >= 0;
            if (comp_ok) {
                if (squared)
                    comp_ok = D <= 4 * zz_pow(p, static_cast<unsigned long>(k_hi - 1));
                else
                    comp_ok = D * D <= 16 * scale_sq;
            }
            if (comp_ok)
                ++audit.comp_holds;
        }

        const double w = std::pow(static_cast<double>(p), -s);
        const double lf = normalized_value(f.a(p), p, kF);
        const double lg = normalized_value(g.a(p), p, kG);
        const double diff = squared ? lf * lf - lg * lg : lf - lg;
        lhs_total.add(diff * diff * w);
        if (outside_F) {
            lhs_out.add(diff * diff * w);
            out_diff.add(diff * w);
        } else {
            lhs_in.add(diff * diff * w);
            sum_F_w.add(w);
        }
    }

    audit.lhs_total = lhs_total.value();
    audit.lhs_in_F = lhs_in.value();
    audit.bound_in_F = 16.0 * sum_F_w.value();
    audit.lhs_out_F = lhs_out.value();
    audit.bound_out_F = 4.0 * out_diff.value();
    audit.chain_bound = 32.0 * sum_F_w.value();

    audit.density_F = analytic_density_proxy(
        ps, [&in_F](std::int64_t p) { return in_F.count(p) != 0; }, s, x);
    std::unordered_set<std::int64_t> in_E(part.E.begin(), part.E.end());
    audit.density_E = analytic_density_proxy(
        ps, [&in_E](std::int64_t p) { return in_E.count(p) != 0; }, s, x);
    audit.natural_density_F =
        audit.good_primes > 0
            ? static_cast<double>(part.F.size()) / static_cast<double>(audit.good_primes)
            : 0.0;
    audit.density_verdict = audit.density_F.value >= 1.0 / 16.0;
    audit.equality_remark = audit.density_E.value <= 7.0 / 8.0;
    return audit;
}

CmReport cm_detect(const EigenvalueTable& f, std::int64_t x) {
    if (x < 2 || x > f.n_max())
        throw std::invalid_argument("cm_detect: bound outside [2, n_max]");
    CmReport rep;
    for (std::int64_t p : sieve(x).primes) {
        if (f.level() % p == 0)
            continue;
        ++rep.good_count;
        if (f.a(p) == 0)
            ++rep.zero_count;
    }
    if (rep.good_count == 0)
        throw std::invalid_argument("cm_detect: no good primes below bound");
    rep.zero_fraction =
        static_cast<double>(rep.zero_count) / static_cast<double>(rep.good_count);
    if (rep.zero_fraction > 0.4)
        rep.status = CmStatus::cm;
    else if (rep.zero_fraction < 0.1)
        rep.status = CmStatus::not_cm;
    else
        throw hypothesis_error(
            "cm_detect: zero fraction " + std::to_string(rep.zero_fraction) + " for " +
            f.label() + " is inside the undecided band [0.1, 0.4]; increase the bound");
    return rep;
}

TwistReport twist_detect(const EigenvalueTable& f, const EigenvalueTable& g,
                         std::int64_t x) {
    check_bound(f, g, x, "twist_detect");
    TwistReport rep;
    if (f.weight() != g.weight()) {
        rep.status = TwistStatus::not_twist;
        rep.reason = "weights differ (" + std::to_string(f.weight()) + " vs " +
                     std::to_string(g.weight()) + ")";
        return rep;
    }
    const std::int64_t bad_levels = f.level() * g.level();
    for (std::int64_t p : sieve(x).primes) {
        if (bad_levels % p == 0)
            continue;
        // Equal weights, so |lambda_f| == |lambda_g| iff |a_f| == |a_g|.
        if (mpz_cmpabs(f.a(p).get_mpz_t(), g.a(p).get_mpz_t()) != 0) {
            rep.status = TwistStatus::not_twist;
            rep.witness = p;
            rep.reason = "|a(" + std::to_string(p) + ")| differs: " + f.a(p).get_str() +
                         " vs " + g.a(p).get_str();
            return rep;
        }
    }
    rep.status = TwistStatus::twist_equivalent;
    rep.reason = "|a(p)| identical at every good prime <= " + std::to_string(x);
    return rep;
}

}  // namespace heckelab
