#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heckelab/catalog.hpp"
#include "heckelab/errors.hpp"
#include "heckelab/hecke.hpp"
#include "heckelab/verify.hpp"
#include "oracles.hpp"

using namespace heckelab;

namespace {

// Shared expansions; several cases below need the same tables and the
// weight-16 one is the expensive member.
const EigenvalueTable& cat(const std::string& label, std::int64_t n_max) {
    static std::map<std::pair<std::string, std::int64_t>, EigenvalueTable> cache;
    const auto key = std::make_pair(label, n_max);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, expand(find_form(label), n_max)).first;
    return it->second;
}

// b(n) = chi(n) a(n) for the level-11 form, chi the quadratic character
// mod 4: a genuine quadratic twist (level 176), Hecke-consistent away
// from {2, 11} and |b(p)| == |a(p)| at every good prime.
EigenvalueTable synthetic_twist(std::int64_t n_max) {
    const EigenvalueTable& base = cat("11.2.eta", 10000);
    std::vector<ZZ> b;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const int chi = n % 2 == 0 ? 0 : (n % 4 == 1 ? 1 : -1);
        b.push_back(chi * base.a(n));
    }
    FormSpec spec{"176.2.twist11", 2, 176, ExternalSource{}, false, "11.2.eta"};
    return EigenvalueTable(std::move(spec), std::move(b));
}

// a(p) = 0 on primes p = 1 (mod 8), about a quarter of all primes: lands in
// the detector's undecided band by construction.
EigenvalueTable quarter_zero_table(std::int64_t n_max) {
    std::vector<ZZ> a(static_cast<std::size_t>(n_max), ZZ(1));
    for (std::int64_t p : oracles::trial_division_primes(n_max))
        if (p % 8 == 1)
            a[static_cast<std::size_t>(p - 1)] = 0;
    FormSpec spec{"1.2.synthetic-sparse", 2, 1, ExternalSource{}, false,
                  "1.2.synthetic-sparse"};
    return EigenvalueTable(std::move(spec), std::move(a));
}

}  // namespace

TEST_CASE("partition") {
    SUBCASE("weight 12 vs weight 16, bound 10^4 (frozen sizes)") {
        const PrimePartition part =
            partition(cat("1.12.delta", 10000), cat("1.16.delta-e4", 10000), 10000, false);
        CHECK(part.F.size() == 618);
        CHECK(part.Fprime.size() == 611);
        CHECK(part.E.empty());
        CHECK(part.excluded.empty());
        CHECK(part.F.size() + part.Fprime.size() == 1229);  // pi(10^4)
    }
    SUBCASE("f against itself ties everywhere") {
        const PrimePartition part =
            partition(cat("1.12.delta", 10000), cat("1.12.delta", 10000), 1000, false);
        CHECK(part.F.empty());
        CHECK(part.Fprime.empty());
        CHECK(part.E.size() == 168);  // pi(1000)
    }
    SUBCASE("swapping the pair swaps F and F'") {
        const auto& f = cat("1.12.delta", 10000);
        const auto& g = cat("11.2.eta", 10000);
        const PrimePartition fg = partition(f, g, 2000, false);
        const PrimePartition gf = partition(g, f, 2000, false);
        CHECK(fg.F == gf.Fprime);
        CHECK(fg.Fprime == gf.F);
        CHECK(fg.E == gf.E);
        CHECK(fg.excluded == std::vector<std::int64_t>{11});
    }
    SUBCASE("p = 2 separates weight 12 from the level-11 form") {
        // lambda(2) = -24/2^5.5 = -0.53..., versus -2/sqrt(2) = -1.41...
        const PrimePartition part =
            partition(cat("1.12.delta", 10000), cat("11.2.eta", 10000), 100, false);
        CHECK(std::find(part.Fprime.begin(), part.Fprime.end(), 2) != part.Fprime.end());
    }
    SUBCASE("bad primes of both levels are excluded") {
        const PrimePartition part =
            partition(cat("11.2.eta", 10000), cat("14.2.eta", 1000), 100, false);
        CHECK(part.excluded == std::vector<std::int64_t>{2, 7, 11});
    }
    SUBCASE("bound checks") {
        const auto& f = cat("1.12.delta", 10000);
        CHECK_THROWS_AS(partition(f, cat("14.2.eta", 1000), 1001, false),
                        std::invalid_argument);
        CHECK_THROWS_AS(partition(f, f, 1, false), std::invalid_argument);
    }
}

TEST_CASE("partition agrees with floating comparison away from ties") {
    const std::int64_t x = 3000;
    const std::pair<const char*, const char*> pairs[] = {
        {"1.12.delta", "1.16.delta-e4"},
        {"1.12.delta", "11.2.eta"},
        {"11.2.eta", "27.2.eta"},
    };
    for (const auto& [fl, gl] : pairs) {
        const auto& f = cat(fl, 10000);
        const auto& g = cat(gl, 10000);
        const PrimePartition part = partition(f, g, x, false);
        const std::set<std::int64_t> in_F(part.F.begin(), part.F.end());
        const std::set<std::int64_t> in_E(part.E.begin(), part.E.end());
        const std::set<std::int64_t> bad(part.excluded.begin(), part.excluded.end());
        for (std::int64_t p : sieve(x).primes) {
            if (bad.count(p))
                continue;
            const double lf = normalized_value(f.a(p), p, f.weight());
            const double lg = normalized_value(g.a(p), p, g.weight());
            if (std::abs(lf - lg) <= 1e-9)
                continue;  // too close for doubles to arbitrate
            if (lf < lg)
                CHECK(in_F.count(p) == 1);
            else
                CHECK((in_F.count(p) == 0 && in_E.count(p) == 0));
        }
    }
}

TEST_CASE("moment_report") {
    const auto& delta = cat("1.12.delta", 10000);
    const auto& wt16 = cat("1.16.delta-e4", 10000);

    SUBCASE("frozen second/fourth moments for (weight 12, weight 16) at 10^4") {
        const MomentReport rep = moment_report(delta, wt16, 1.05, 10000);
        CHECK(rep.good_primes == 1229);
        CHECK(rep.square_identity_ok);
        const MomentSums& nat = rep.natural;
        CHECK(nat.one == 1229.0);
        CHECK(std::abs(nat.f2 / nat.one - 0.98337) < 2e-5);
        CHECK(std::abs(nat.f4 / nat.one - 1.93762) < 2e-5);
        CHECK(std::abs(nat.fg / nat.one - (-0.01098)) < 2e-5);
        CHECK(std::abs(nat.f2g2 / nat.one - 0.95665) < 2e-5);
        CHECK(std::abs(nat.diff2 / nat.one - 1.99188) < 2e-5);
        CHECK(std::abs(nat.sqdiff2 / nat.one - 1.95957) < 2e-5);
    }
    SUBCASE("algebraic identities tie the fields together") {
        const MomentReport rep = moment_report(delta, wt16, 1.2, 5000);
        for (const MomentSums* sums : {&rep.dirichlet, &rep.natural}) {
            CHECK(std::abs(sums->diff2 - (sums->f2 + sums->g2 - 2.0 * sums->fg)) < 1e-8);
            CHECK(std::abs(sums->sqdiff2 - (sums->f4 + sums->g4 - 2.0 * sums->f2g2)) <
                  1e-8);
        }
    }
    SUBCASE("f against itself has vanishing difference moments") {
        const MomentReport rep = moment_report(delta, delta, 1.1, 2000);
        CHECK(rep.natural.diff2 == 0.0);
        CHECK(rep.natural.sqdiff2 == 0.0);
        CHECK(rep.dirichlet.diff2 == 0.0);
        CHECK(rep.square_identity_ok);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(moment_report(delta, wt16, 1.0, 1000), std::invalid_argument);
        CHECK_THROWS_AS(moment_report(delta, wt16, 1.1, 10001), std::invalid_argument);
    }
}

TEST_CASE("proposition_ratio") {
    const auto& delta = cat("1.12.delta", 10000);
    const auto& wt16 = cat("1.16.delta-e4", 10000);

    CHECK(proposition_ratio(delta, delta, 1.05, 2000, false) == 0.0);
    // The limit of the linear ratio is 2 for distinct forms.
    const double linear = proposition_ratio(delta, wt16, 1.05, 10000, false);
    CHECK(linear > 1.5);
    CHECK(linear < 2.5);
    // Squared mode passes its hypothesis gate here (no CM, not twists) and
    // also tends to 2.
    const double squared = proposition_ratio(delta, wt16, 1.05, 10000, true);
    CHECK(squared > 1.2);
    CHECK(squared < 2.8);

    SUBCASE("squared mode refuses a CM form") {
        CHECK_THROWS_AS(
            proposition_ratio(cat("27.2.eta", 10000), cat("14.2.eta", 1000), 1.05, 1000,
                              true),
            hypothesis_error);
    }
    SUBCASE("squared mode refuses twin tables") {
        CHECK_THROWS_AS(proposition_ratio(delta, delta, 1.05, 1000, true),
                        hypothesis_error);
    }
}

TEST_CASE("theorem_audit") {
    const auto& delta = cat("1.12.delta", 10000);
    const auto& wt16 = cat("1.16.delta-e4", 10000);

    SUBCASE("weight 12 vs weight 16 at 10^4, linear") {
        const TheoremAudit a = theorem_audit(delta, wt16, 1.05, 10000, false);
        CHECK(a.good_primes == 1229);
        // every per-term inequality holds exactly
        CHECK(a.cap_checked == 1229);
        CHECK(a.cap_holds == 1229);
        CHECK(a.comp_checked == 1229 - 618);
        CHECK(a.comp_holds == a.comp_checked);
        // the chain: lhs splits, each piece below its bound
        CHECK(std::abs(a.lhs_total - (a.lhs_in_F + a.lhs_out_F)) < 1e-9);
        CHECK(a.lhs_in_F <= a.bound_in_F);
        CHECK(a.lhs_out_F <= a.bound_out_F);
        CHECK(a.chain_bound == 2.0 * a.bound_in_F);
        CHECK(a.lhs_total > 0.0);
        // densities (proxy value frozen from an independent run)
        CHECK(std::abs(a.density_F.value - 0.47887) < 2e-5);
        CHECK(a.natural_density_F == doctest::Approx(618.0 / 1229.0));
        CHECK(a.density_E.value == 0.0);
        CHECK(a.density_verdict);
        CHECK(a.equality_remark);
        CHECK(a.density_F.s == 1.05);
        CHECK_FALSE(a.squared);
    }
    SUBCASE("level-aware pair keeps bad primes out of every count") {
        const TheoremAudit a =
            theorem_audit(delta, cat("11.2.eta", 10000), 1.05, 2000, false);
        CHECK(a.good_primes == 302);  // pi(2000) = 303, minus p = 11
        CHECK(a.cap_checked == 302);
        CHECK(a.cap_holds == 302);
        CHECK(a.comp_holds == a.comp_checked);
        CHECK(a.density_verdict);
        CHECK(a.equality_remark);
    }
    SUBCASE("squared mode") {
        const TheoremAudit a = theorem_audit(delta, wt16, 1.05, 3000, true);
        CHECK(a.squared);
        CHECK(a.cap_holds == a.cap_checked);
        CHECK(a.comp_holds == a.comp_checked);
        CHECK(a.lhs_in_F <= a.bound_in_F);
        CHECK(a.lhs_out_F <= a.bound_out_F);
        CHECK(a.density_verdict);
    }
    SUBCASE("squared mode is hypothesis-gated") {
        CHECK_THROWS_AS(theorem_audit(delta, delta, 1.05, 1000, true), hypothesis_error);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(theorem_audit(delta, wt16, 0.9, 1000, false),
                        std::invalid_argument);
    }
}

TEST_CASE("cm_detect") {
    SUBCASE("CM eta quotients sit near one half") {
        for (const char* label : {"27.2.eta", "32.2.eta", "36.2.eta"}) {
            const CmReport rep = cm_detect(cat(label, 10000), 10000);
            CHECK(rep.status == CmStatus::cm);
            CHECK(rep.zero_fraction > 0.45);
            CHECK(rep.zero_fraction < 0.55);
        }
    }
    SUBCASE("weight 12 never vanishes below 10^4") {
        const CmReport rep = cm_detect(cat("1.12.delta", 10000), 10000);
        CHECK(rep.status == CmStatus::not_cm);
        CHECK(rep.zero_count == 0);
        CHECK(rep.good_count == 1229);
    }
    SUBCASE("the level-11 form has a thin sprinkling of zeros, still not CM") {
        const CmReport rep = cm_detect(cat("11.2.eta", 10000), 10000);
        CHECK(rep.status == CmStatus::not_cm);
        CHECK(rep.zero_count == 15);
        CHECK(rep.good_count == 1228);
        CHECK(rep.zero_fraction > 0.005);
        CHECK(rep.zero_fraction < 0.05);
    }
    SUBCASE("a fraction inside the undecided band raises") {
        const EigenvalueTable t = quarter_zero_table(1000);
        CHECK_THROWS_AS(cm_detect(t, 1000), hypothesis_error);
    }
    SUBCASE("bound validation") {
        CHECK_THROWS_AS(cm_detect(cat("11.2.eta", 10000), 10001), std::invalid_argument);
        CHECK_THROWS_AS(cm_detect(cat("11.2.eta", 10000), 1), std::invalid_argument);
    }
}

TEST_CASE("twist_detect") {
    const auto& delta = cat("1.12.delta", 10000);
    const auto& e11 = cat("11.2.eta", 10000);

    SUBCASE("a form is trivially twist-equivalent to itself") {
        const TwistReport rep = twist_detect(delta, delta, 1000);
        CHECK(rep.status == TwistStatus::twist_equivalent);
        CHECK(rep.witness == 0);
    }
    SUBCASE("distinct weights short-circuit") {
        const TwistReport rep = twist_detect(delta, cat("1.16.delta-e4", 10000), 1000);
        CHECK(rep.status == TwistStatus::not_twist);
        CHECK(rep.witness == 0);
        CHECK(rep.reason.find("weights differ") != std::string::npos);
    }
    SUBCASE("level 11 vs level 14: first good prime already separates") {
        const TwistReport rep = twist_detect(e11, cat("14.2.eta", 1000), 1000);
        CHECK(rep.status == TwistStatus::not_twist);
        CHECK(rep.witness == 3);
    }
    SUBCASE("the two CM forms with the same field differ at p = 7") {
        const TwistReport rep = twist_detect(cat("27.2.eta", 10000), cat("36.2.eta", 1000),
                                             1000);
        CHECK(rep.status == TwistStatus::not_twist);
        CHECK(rep.witness == 7);  // both vanish at 5; |a(7)| = 1 vs 4
    }
    SUBCASE("a genuine quadratic twist is recognized") {
        EigenvalueTable twisted = synthetic_twist(1000);
        CHECK(audit_hecke(twisted, 1000).pass);  // the twist is Hecke-consistent
        const TwistReport rep = twist_detect(e11, twisted, 1000);
        CHECK(rep.status == TwistStatus::twist_equivalent);
        CHECK(rep.witness == 0);
    }
}

TEST_CASE("check_squared_hypotheses") {
    const auto& delta = cat("1.12.delta", 10000);
    CHECK_NOTHROW(check_squared_hypotheses(delta, cat("1.16.delta-e4", 10000), 2000));
    CHECK_THROWS_AS(check_squared_hypotheses(delta, delta, 1000), hypothesis_error);
    CHECK_THROWS_AS(check_squared_hypotheses(cat("32.2.eta", 10000), delta, 1000),
                    hypothesis_error);
    EigenvalueTable twisted = synthetic_twist(1000);
    CHECK_THROWS_AS(check_squared_hypotheses(cat("11.2.eta", 10000), twisted, 1000),
                    hypothesis_error);
}
