#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heckelab/bigint.hpp"

namespace heckelab {

/// prod_d eta(d*z)^{r_d}: factors are (scale d >= 1, exponent r != 0).
/// The q-expansion starts at the prefactor t = (sum d*r_d)/24, which must be
/// a positive integer for the recipes handled here.
struct EtaQuotient {
    std::vector<std::pair<std::int64_t, int>> factors;
    bool operator==(const EtaQuotient&) const = default;
};

/// Delta * E4^e4 * E6^e6; weight is 12 + 4*e4 + 6*e6, level 1.
struct DeltaTimes {
    int e4 = 0;
    int e6 = 0;
    bool operator==(const DeltaTimes&) const = default;
};

/// Placeholder recipe for tables ingested from files: the coefficients are
/// given, there is nothing to expand.
struct ExternalSource {
    bool operator==(const ExternalSource&) const = default;
};

using Recipe = std::variant<EtaQuotient, DeltaTimes, ExternalSource>;

/// Construction recipe plus arithmetic metadata for one rational newform.
struct FormSpec {
    std::string label;        // e.g. "1.12.delta", "11.2.eta"
    int weight = 0;           // even, >= 2
    std::int64_t level = 1;   // N >= 1
    Recipe recipe;
    bool cm_expected = false; // complex multiplication (vanishing a_p on ~half the primes)
    std::string twist_class;  // forms sharing a tag are quadratic twists of one another
    bool operator==(const FormSpec&) const = default;
};

/// Structural validity of a FormSpec: weight even >= 2, level >= 1; for eta
/// quotients every scale divides the level, weight == (sum r_d)/2 and the
/// prefactor t = (sum d*r_d)/24 is a positive integer; for DeltaTimes the
/// weight matches 12 + 4*e4 + 6*e6. Throws std::invalid_argument on failure.
void validate(const FormSpec& spec);

/// q-power prefactor t of an eta quotient (the expansion is q^t * product).
std::int64_t eta_prefactor(const EtaQuotient& recipe);

class EigenvalueTable;
struct AuditReport;
AuditReport audit_hecke(EigenvalueTable& table, std::int64_t bound);

/// Exact table n -> a_f(n), 1 <= n <= n_max, for one form. Immutable after
/// construction; audit_hecke records the bound up to which the Hecke
/// invariants have been verified.
class EigenvalueTable {
public:
    /// coeffs[i] = a(i+1); coeffs must be nonempty.
    EigenvalueTable(FormSpec spec, std::vector<ZZ> coeffs);

    const FormSpec& spec() const noexcept { return spec_; }
    const std::string& label() const noexcept { return spec_.label; }
    int weight() const noexcept { return spec_.weight; }
    std::int64_t level() const noexcept { return spec_.level; }
    std::int64_t n_max() const noexcept { return static_cast<std::int64_t>(a_.size()); }
    /// a_f(n) for 1 <= n <= n_max (bounds-checked).
    const ZZ& a(std::int64_t n) const;
    /// Highest bound at which audit_hecke has passed (0 = never audited).
    std::int64_t audited_bound() const noexcept { return audited_bound_; }

    /// Copy with richer spec metadata (recipe, CM/twist tags) attached to the
    /// same coefficients, e.g. after a cache load; label, weight and level
    /// must agree with the current spec. Keeps the audit watermark.
    EigenvalueTable with_spec(FormSpec s) const;

    /// Identity comparison on the serialized content: label, weight, level
    /// and coefficients. Recipe/tags/audit watermark are provenance, not
    /// content, and are ignored (file round trips drop the recipe).
    bool operator==(const EigenvalueTable& o) const {
        return spec_.label == o.spec_.label && spec_.weight == o.spec_.weight &&
               spec_.level == o.spec_.level && a_ == o.a_;
    }

private:
    FormSpec spec_;
    std::vector<ZZ> a_;
    std::int64_t audited_bound_ = 0;

    friend AuditReport audit_hecke(EigenvalueTable& table, std::int64_t bound);
};

/// Which table invariant an audit found violated.
enum class AuditViolation {
    none,
    leading_coefficient,    // a(1) != 1
    multiplicativity,       // a(m*n) != a(m)*a(n), gcd(m,n) = 1
    prime_power_recurrence, // a(p^m) != a(p)a(p^{m-1}) - p^{k-1}a(p^{m-2})
    deligne_bound,          // a(p)^2 > 4 p^{k-1} at a good prime
};

/// Outcome of audit_hecke; failures are data, not exceptions. (i, j) locate
/// the first counterexample: (m, n) for multiplicativity, (p, m) for the
/// recurrence, (p, 0) for the Deligne bound.
struct AuditReport {
    bool pass = true;
    AuditViolation kind = AuditViolation::none;
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::string detail;  // human-readable one-liner, empty on pass
};

/// Checks a(1) = 1, coprime multiplicativity, the good-prime power recurrence
/// and the Deligne bound for all indices <= bound (primes dividing the level
/// are exempt from the last two). On pass, bumps the table's audit watermark.
/// Requires 1 <= bound <= table.n_max().
AuditReport audit_hecke(EigenvalueTable& table, std::int64_t bound);

/// The built-in forms: level-1 weights 12/16/18/20/22/26 (Delta times
/// Eisenstein factors) and weight-2 eta quotients at levels 11, 14, 15, 20,
/// 24, 27, 32, 36 (the last three with complex multiplication).
std::vector<FormSpec> builtin_catalog();

/// Catalog lookup by label; throws std::invalid_argument for unknown labels.
FormSpec find_form(const std::string& label);

/// Default eager-audit bound used by expand: min(n_max, 2000). Full-depth
/// audits are explicit calls.
inline constexpr std::int64_t kDefaultAuditBound = 2000;

/// Expands a recipe into an eigenvalue table with a(n) for n <= n_max and
/// audits it up to min(n_max, audit_bound); audit_bound = 0 means the
/// default. Throws std::invalid_argument for unsupported recipes (external
/// sources, negative eta exponents) or n_max below the eta prefactor, and
/// audit_error if the expansion fails its own audit.
EigenvalueTable expand(const FormSpec& spec, std::int64_t n_max,
                       std::int64_t audit_bound = 0);

/// Trace of Frobenius a_p = p + 1 - #E(F_p) for the rank-0 conductor-11
/// curve y^2 + y = x^3 - x^2 - 10x - 20, counted by direct enumeration over
/// F_p (value-table form of the O(p^2) point loop). Independent oracle for
/// the level-11 eta quotient. p must be prime and != 11 (bad reduction).
std::int64_t elliptic_ap(std::int64_t p);

}  // namespace heckelab
