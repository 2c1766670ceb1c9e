#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heckelab/catalog.hpp"
#include "heckelab/density.hpp"

namespace heckelab {

/// Exact three-way split of the primes <= x for a pair (f, g):
///   F       lambda_f(p) <  lambda_g(p)   (squares of these in squared mode)
///   Fprime  lambda_f(p) >  lambda_g(p)
///   E       exact ties
///   excluded  primes dividing either level (bad primes; kept out of all
///             density sets — finitely many cannot move a density)
struct PrimePartition {
    std::string f_label;
    std::string g_label;
    std::int64_t x = 0;
    bool squared = false;
    std::vector<std::int64_t> F;
    std::vector<std::int64_t> Fprime;
    std::vector<std::int64_t> E;
    std::vector<std::int64_t> excluded;
};

/// Builds the partition with exact integer comparisons (dominance_compare /
/// square_dominance_compare). Requires x <= min(f.n_max, g.n_max).
PrimePartition partition(const EigenvalueTable& f, const EigenvalueTable& g,
                         std::int64_t x, bool squared);

/// One weighting of the moment sums over good primes p <= x. For the
/// Dirichlet weighting, `one` is sum p^{-s} and every field is a sum of
/// term * p^{-s}; for the natural weighting, `one` is the good-prime count
/// and the fields are plain sums. Ratios of interest are field / one.
struct MomentSums {
    double one = 0.0;
    double f2 = 0.0;      // lambda_f^2
    double g2 = 0.0;      // lambda_g^2
    double f4 = 0.0;      // lambda_f^4
    double g4 = 0.0;      // lambda_g^4
    double fg = 0.0;      // lambda_f * lambda_g
    double f2g2 = 0.0;    // lambda_f^2 * lambda_g^2
    double diff2 = 0.0;   // (lambda_f - lambda_g)^2
    double sqdiff2 = 0.0; // (lambda_f^2 - lambda_g^2)^2
};

/// Finite-truncation second/fourth-moment sums for a pair, in both
/// weightings, plus the exact per-prime cross-check
/// a(p)^2 == p^{k-1} + a(p^2) for both forms (integer arithmetic; the
/// squared eigenvalue is 1 + the second prime-power eigenvalue).
struct MomentReport {
    std::string f_label;
    std::string g_label;
    double s = 0.0;
    std::int64_t x = 0;
    std::int64_t good_primes = 0;
    MomentSums dirichlet;
    MomentSums natural;
    bool square_identity_ok = false;
};

MomentReport moment_report(const EigenvalueTable& f, const EigenvalueTable& g, double s,
                           std::int64_t x);

/// [sum over good p <= x of (lambda_f - lambda_g)^2 p^{-s}] / [sum p^{-s}]
/// (or the (lambda_f^2 - lambda_g^2)^2 analog with squared = true). The
/// squared mode first enforces the theorem hypotheses: both forms free of
/// complex multiplication and not quadratic twists of each other; failures
/// raise hypothesis_error instead of producing a meaningless ratio.
double proposition_ratio(const EigenvalueTable& f, const EigenvalueTable& g, double s,
                         std::int64_t x, bool squared);

/// Finite-truncation audit of the dominance-density proof chain. The two
/// per-term inequalities are checked in exact integer arithmetic after
/// clearing the p-power denominators; the Dirichlet sums and density proxy
/// are reported as floating values.
struct TheoremAudit {
    std::string f_label;
    std::string g_label;
    double s = 0.0;
    std::int64_t x = 0;
    bool squared = false;
    std::int64_t good_primes = 0;

    // Dirichlet-weighted truncations of the chain quantities, good p <= x.
    // diff means lambda_f - lambda_g (squared mode: lambda_f^2 - lambda_g^2).
    double lhs_total = 0.0;    // sum diff^2 p^{-s}
    double lhs_in_F = 0.0;     // the part with p in F
    double bound_in_F = 0.0;   // 16 sum_{p in F} p^{-s}
    double lhs_out_F = 0.0;    // the part with good p not in F
    double bound_out_F = 0.0;  // 4 sum_{good p not in F} diff * p^{-s}
    double chain_bound = 0.0;  // 32 sum_{p in F} p^{-s}

    // Exact per-term checks. cap: diff^2 <= 16 everywhere. complement: on
    // good p outside F, 0 <= diff and diff^2 <= 4*diff.
    std::int64_t cap_checked = 0;
    std::int64_t cap_holds = 0;
    std::int64_t comp_checked = 0;
    std::int64_t comp_holds = 0;

    DensityEstimate density_F;        // analytic proxy of F at (s, x)
    double natural_density_F = 0.0;   // |F| / good prime count
    DensityEstimate density_E;        // analytic proxy of the tie set
    bool density_verdict = false;     // density_F.value >= 1/16
    bool equality_remark = false;     // density_E.value <= 7/8
};

/// Squared mode is hypothesis-gated exactly like proposition_ratio.
TheoremAudit theorem_audit(const EigenvalueTable& f, const EigenvalueTable& g, double s,
                           std::int64_t x, bool squared);

enum class CmStatus { cm, not_cm };

/// Complex-multiplication heuristic: the fraction of good primes p <= x with
/// a(p) = 0 is ~1/2 for CM forms and ~0 otherwise. Thresholds 0.4 / 0.1 sit
/// far from both observed clusters; a fraction between them throws
/// hypothesis_error (the sample is too small to call).
struct CmReport {
    CmStatus status = CmStatus::not_cm;
    double zero_fraction = 0.0;
    std::int64_t zero_count = 0;
    std::int64_t good_count = 0;
};

CmReport cm_detect(const EigenvalueTable& f, std::int64_t x);

enum class TwistStatus { twist_equivalent, not_twist };

/// Quadratic-twist heuristic: twist-equivalent iff |lambda_f(p)| equals
/// |lambda_g(p)| exactly (integer comparison) for every good prime p <= x.
/// Distinct weights short-circuit to not_twist. `witness` is the first
/// separating prime (0 when none applies).
struct TwistReport {
    TwistStatus status = TwistStatus::not_twist;
    std::int64_t witness = 0;
    std::string reason;
};

TwistReport twist_detect(const EigenvalueTable& f, const EigenvalueTable& g,
                         std::int64_t x);

/// The squared-dominance hypothesis gate used by proposition_ratio and
/// theorem_audit: throws hypothesis_error when the pair is twist-equivalent
/// up to x or either form has complex multiplication (or a detector is
/// inconclusive). No-op when the hypotheses hold.
void check_squared_hypotheses(const EigenvalueTable& f, const EigenvalueTable& g,
                              std::int64_t x);

}  // namespace heckelab
