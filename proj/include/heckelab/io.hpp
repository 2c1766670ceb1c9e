#pragma once

#include <cstdint>
#include <filesystem>

#include "heckelab/catalog.hpp"

namespace heckelab {

/// Audit depth applied to every loaded table: min(n_max, 10^4). Loading is
/// the trust boundary, so the audit is not optional.
inline constexpr std::int64_t kLoadAuditBound = 10000;

/// Writes the table as CSV: '#'-prefixed key=value header lines
/// (format_version, label, weight, level, n_max) followed by one "n,a" row
/// per coefficient in decimal. Written to a temp file in the target
/// directory and renamed into place. The table must have been audited.
/// Throws io_error on filesystem failure, audit_error if never audited.
void save_table(const EigenvalueTable& table, const std::filesystem::path& path);

/// JSON flavor of save_table: object with label/weight/level/n_max and
/// "coefficients" as an array of decimal strings (strings keep coefficients
/// exact beyond 53-bit doubles).
void save_table_json(const EigenvalueTable& table, const std::filesystem::path& path);

/// Reads a table in either codec (sniffed: leading '{' means JSON). Every
/// load replays the Hecke audit up to kLoadAuditBound and rejects files that
/// fail it. Throws io_error for syntax/grammar problems (with a line number
/// for CSV), including odd weights and non-integer coefficients, and
/// audit_error with the first counterexample for corrupt eigenvalue data.
EigenvalueTable load_table(const std::filesystem::path& path);

/// expand() with a disk cache: looks for cache_dir/<label>.n<n_max>.csv,
/// loading (and re-auditing) it on a hit; on a miss or an unreadable cache
/// entry, expands from the recipe and atomically rewrites the entry. An
/// empty cache_dir disables caching. The returned table keeps the caller's
/// spec metadata (recipe and tags).
EigenvalueTable cached_expand(const FormSpec& spec, std::int64_t n_max,
                              const std::filesystem::path& cache_dir);

}  // namespace heckelab
