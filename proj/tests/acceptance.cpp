// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. Bounds and bands are pinned here on purpose — they are
// the contract, not tunables.

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "heckelab/catalog.hpp"
#include "heckelab/density.hpp"
#include "heckelab/errors.hpp"
#include "heckelab/hecke.hpp"
#include "heckelab/io.hpp"
#include "heckelab/verify.hpp"

#ifndef HECKELAB_BIN
#error "HECKELAB_BIN must be defined"
#endif

namespace fs = std::filesystem;
using namespace heckelab;

namespace {

int failures = 0;

void report(int idx, bool pass, const std::string& what, const std::string& detail) {
    std::cout << "[C" << (idx < 10 ? "0" : "") << idx << "] " << (pass ? "PASS" : "FAIL")
              << " " << what;
    if (!detail.empty())
        std::cout << " (" << detail << ")";
    std::cout << "\n" << std::flush;
    if (!pass)
        ++failures;
}

std::string fmt(double v, int prec = 5) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(prec);
    out << v;
    return out.str();
}

// All fourteen catalog tables at the acceptance bound, expanded in parallel.
std::map<std::string, EigenvalueTable> expand_all(std::int64_t n_max) {
    const auto forms = builtin_catalog();
    std::vector<std::future<EigenvalueTable>> futures;
    futures.reserve(forms.size());
    for (const auto& f : forms)
        futures.push_back(
            std::async(std::launch::async, [f, n_max] { return expand(f, n_max); }));
    std::map<std::string, EigenvalueTable> out;
    for (std::size_t i = 0; i < forms.size(); ++i)
        out.emplace(forms[i].label, futures[i].get());
    return out;
}

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string("\"") + HECKELAB_BIN + "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

}  // namespace

int main() {
    const std::int64_t X = 10000;
    std::cout << "expanding the catalog to n_max = " << X << " ...\n" << std::flush;
    auto tables = expand_all(X);
    const PrimeSieve ps = sieve(X);

    // ---- C1: closed forms of the prime-power eigenvalue polynomials --------
    {
        const IntPolynomial p2{{ZZ(-1), ZZ(0), ZZ(1)}};
        const IntPolynomial p4{{ZZ(1), ZZ(0), ZZ(-3), ZZ(0), ZZ(1)}};
        const bool ok = chebyshev_P(2) == p2 && chebyshev_P(4) == p4;
        report(1, ok, "prime-power eigenvalue polynomials match their closed forms",
               "P2 = x^2 - 1, P4 = x^4 - 3x^2 + 1");
    }

    // ---- C2: full Hecke audit of every catalog table -----------------------
    {
        bool ok = true;
        std::string bad;
        for (auto& [label, table] : tables) {
            const AuditReport r = audit_hecke(table, X);
            if (!r.pass) {
                ok = false;
                bad = label + ": " + r.detail;
                break;
            }
        }
        report(2, ok, "every catalog table passes the Hecke audit at bound 10000",
               ok ? std::to_string(tables.size()) + " forms" : bad);
    }

    // ---- C3: level-11 table vs. elliptic point counts -----------------------
    {
        const EigenvalueTable& t11 = tables.at("11.2.eta");
        std::int64_t checked = 0, agree = 0;
        for (std::int64_t p : sieve(1000).primes) {
            if (p == 11)
                continue;
            ++checked;
            if (t11.a(p) == elliptic_ap(p))
                ++agree;
        }
        report(3, agree == checked,
               "level-11 eigenvalues equal elliptic point counts for p <= 1000",
               std::to_string(agree) + "/" + std::to_string(checked) + " primes");
    }

    // ---- C4: eigenvalue bound at every good prime ---------------------------
    {
        std::int64_t checked = 0, holds = 0;
        for (const auto& [label, table] : tables) {
            for (std::int64_t p : ps.primes) {
                if (table.level() % p == 0)
                    continue;
                ++checked;
                const ZZ& ap = table.a(p);
                if (ap * ap <= 4 * zz_pow(p, static_cast<unsigned long>(table.weight() - 1)))
                    ++holds;
            }
        }
        report(4, holds == checked,
               "a(p)^2 <= 4 p^(k-1) at every good prime <= 10000, all forms",
               std::to_string(holds) + "/" + std::to_string(checked) + " checks");
    }

    // ---- C5: per-term difference inequalities at 100% ----------------------
    {
        const std::pair<const char*, const char*> pairs[] = {
            {"1.12.delta", "1.16.delta-e4"}, {"1.12.delta", "11.2.eta"},
            {"1.16.delta-e4", "1.18.delta-e6"}, {"11.2.eta", "14.2.eta"},
            {"11.2.eta", "27.2.eta"},
        };
        bool ok = true;
        std::int64_t cap_total = 0, comp_total = 0;
        std::string bad;
        for (const auto& [fl, gl] : pairs) {
            const TheoremAudit a =
                theorem_audit(tables.at(fl), tables.at(gl), 1.05, X, false);
            cap_total += a.cap_checked;
            comp_total += a.comp_checked;
            if (a.cap_holds != a.cap_checked || a.comp_holds != a.comp_checked) {
                ok = false;
                bad = std::string(fl) + " vs " + gl;
            }
        }
        report(5, ok, "per-term difference inequalities hold at 100% for 5 pairs",
               ok ? std::to_string(cap_total) + " cap + " + std::to_string(comp_total) +
                        " complement terms"
                  : bad);
    }

    // ---- C6 / C7: moment bands for (weight 12, weight 16) ------------------
    const MomentReport moments =
        moment_report(tables.at("1.12.delta"), tables.at("1.16.delta-e4"), 1.05, X);
    {
        const double m2 = moments.natural.f2 / moments.natural.one;
        const double m4 = moments.natural.f4 / moments.natural.one;
        const bool ok = in_band(m2, 0.9, 1.1) && in_band(m4, 1.8, 2.2);
        report(6, ok, "weight-12 moments: <lambda^2> in [0.9,1.1], <lambda^4> in [1.8,2.2]",
               "measured " + fmt(m2) + " and " + fmt(m4));
    }
    {
        const auto& nat = moments.natural;
        const double diff2 = nat.diff2 / nat.one;
        const double fg = nat.fg / nat.one;
        const double sqdiff2 = nat.sqdiff2 / nat.one;
        const double f2g2 = nat.f2g2 / nat.one;
        const bool ok = in_band(diff2, 1.85, 2.15) && in_band(fg, -0.1, 0.1) &&
                        in_band(sqdiff2, 1.8, 2.2) && in_band(f2g2, 0.9, 1.1);
        report(7, ok,
               "pair moments: <(lf-lg)^2> in [1.85,2.15], <lf*lg> in [-0.1,0.1], "
               "<(lf^2-lg^2)^2> in [1.8,2.2], <lf^2*lg^2> in [0.9,1.1]",
               "measured " + fmt(diff2) + ", " + fmt(fg) + ", " + fmt(sqdiff2) + ", " +
                   fmt(f2g2));
    }

    // ---- C8: dominance density across every distinct pair ------------------
    {
        const auto forms = builtin_catalog();
        bool ok = true;
        std::string bad;
        double worst_F = 1.0, worst_E = 0.0;
        for (std::size_t i = 0; i < forms.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < forms.size() && ok; ++j) {
                const PrimePartition part =
                    partition(tables.at(forms[i].label), tables.at(forms[j].label), X,
                              false);
                const std::set<std::int64_t> in_F(part.F.begin(), part.F.end());
                const std::set<std::int64_t> in_Fp(part.Fprime.begin(),
                                                   part.Fprime.end());
                const std::set<std::int64_t> in_E(part.E.begin(), part.E.end());
                const auto member = [](const std::set<std::int64_t>& s) {
                    return [&s](std::int64_t p) { return s.count(p) != 0; };
                };
                const double pF =
                    analytic_density_proxy(ps, member(in_F), 1.05, X).value;
                const double pFp =
                    analytic_density_proxy(ps, member(in_Fp), 1.05, X).value;
                const double pE =
                    analytic_density_proxy(ps, member(in_E), 1.05, X).value;
                worst_F = std::min({worst_F, pF, pFp});
                worst_E = std::max(worst_E, pE);
                if (pF < 1.0 / 16.0 || pFp < 1.0 / 16.0 || pE > 7.0 / 8.0) {
                    ok = false;
                    bad = forms[i].label + " vs " + forms[j].label + ": F " + fmt(pF) +
                          ", F' " + fmt(pFp) + ", E " + fmt(pE);
                }
            }
        }
        const PrimePartition dpart =
            partition(tables.at("1.12.delta"), tables.at("1.16.delta-e4"), X, false);
        const std::int64_t good = static_cast<std::int64_t>(
            dpart.F.size() + dpart.Fprime.size() + dpart.E.size());
        const double nat_F =
            static_cast<double>(dpart.F.size()) / static_cast<double>(good);
        const bool nat_ok = in_band(nat_F, 0.4, 0.6);
        report(8, ok && nat_ok,
               "dominance proxies >= 1/16 and tie proxies <= 7/8 for all 91 pairs at "
               "s = 1.05; (12,16) natural density in [0.4,0.6]",
               ok ? "worst F-side proxy " + fmt(worst_F) + ", worst tie proxy " +
                        fmt(worst_E) + ", natural density " + fmt(nat_F)
                  : bad);
    }

    // ---- C9: CM classification by vanishing fraction ------------------------
    {
        bool ok = true;
        std::ostringstream detail;
        for (const char* label : {"27.2.eta", "32.2.eta", "36.2.eta"}) {
            const CmReport r = cm_detect(tables.at(label), X);
            const bool good_one =
                r.status == CmStatus::cm && in_band(r.zero_fraction, 0.45, 0.55);
            if (!good_one)
                ok = false;
            detail << label << " " << fmt(r.zero_fraction) << (good_one ? "" : " OUT")
                   << "; ";
        }
        for (const char* label : {"1.12.delta", "11.2.eta", "1.16.delta-e4"}) {
            const CmReport r = cm_detect(tables.at(label), X);
            const bool good_one = r.status == CmStatus::not_cm && r.zero_fraction < 0.01;
            if (!good_one)
                ok = false;
            detail << label << " " << fmt(r.zero_fraction);
            if (!good_one)
                detail << " exceeds the 0.01 band, " << r.zero_count << "/" << r.good_count
                       << " vanishing primes";
            detail << "; ";
        }
        report(9, ok,
               "vanishing fractions: CM forms in [0.45,0.55], non-CM forms below 0.01",
               detail.str());
    }

    // ---- C10: twist detection and the squared-mode refusals ----------------
    {
        const auto forms = builtin_catalog();
        bool ok = true;
        std::string bad;
        for (const auto& f : forms) {
            if (twist_detect(tables.at(f.label), tables.at(f.label), 1000).status !=
                TwistStatus::twist_equivalent) {
                ok = false;
                bad = f.label + " not equivalent to itself";
            }
        }
        std::int64_t cross = 0;
        for (std::size_t i = 0; i < forms.size(); ++i)
            for (std::size_t j = i + 1; j < forms.size(); ++j) {
                ++cross;
                if (twist_detect(tables.at(forms[i].label), tables.at(forms[j].label),
                                 1000)
                        .status != TwistStatus::not_twist) {
                    ok = false;
                    bad = forms[i].label + " vs " + forms[j].label +
                          " wrongly twist-equivalent";
                }
            }
        const int rc_twin = run_cli("compare 1.12.delta 1.12.delta --x-bound 300 --squared");
        const int rc_cm = run_cli("verify 27.2.eta 14.2.eta --x-bound 300 --squared");
        if (rc_twin != 3 || rc_cm != 3) {
            ok = false;
            bad = "squared-mode exits were " + std::to_string(rc_twin) + " and " +
                  std::to_string(rc_cm) + ", expected 3";
        }
        report(10, ok,
               "twist detection: reflexive positives, " + std::to_string(cross) +
                   " catalog negatives, squared-mode refusals exit 3",
               ok ? "" : bad);
    }

    // ---- C11: serialization round trips and corruption rejection -----------
    {
        std::mt19937_64 rng(std::random_device{}());
        const fs::path dir =
            fs::temp_directory_path() / ("heckelab-acceptance-" + std::to_string(rng()));
        fs::create_directories(dir);
        bool ok = true;
        std::string bad;
        for (const auto& f : builtin_catalog()) {
            const EigenvalueTable t = expand(f, 1000);
            const fs::path csv = dir / (f.label + ".csv");
            const fs::path jsn = dir / (f.label + ".json");
            save_table(t, csv);
            save_table_json(t, jsn);
            if (!(load_table(csv) == t) || !(load_table(jsn) == t)) {
                ok = false;
                bad = f.label + " did not round trip";
                break;
            }
        }
        if (ok) {
            // corrupt a(6) of the weight-12 table and expect the audit to name
            // the (2,3) multiplicativity counterexample
            const fs::path csv = dir / "1.12.delta.csv";
            std::string text;
            {
                std::ifstream in(csv);
                text.assign(std::istreambuf_iterator<char>(in),
                            std::istreambuf_iterator<char>());
            }
            const auto pos = text.find("\n6,-6048\n");
            if (pos == std::string::npos) {
                ok = false;
                bad = "could not locate the a(6) row";
            } else {
                text.replace(pos, 9, "\n6,0\n");
                std::ofstream(csv) << text;
                try {
                    load_table(csv);
                    ok = false;
                    bad = "corrupted table was accepted";
                } catch (const audit_error& e) {
                    if (std::string(e.what()).find("(m,n)=(2,3)") == std::string::npos) {
                        ok = false;
                        bad = std::string("unexpected audit message: ") + e.what();
                    }
                } catch (const std::exception& e) {
                    ok = false;
                    bad = std::string("wrong exception type: ") + e.what();
                }
            }
        }
        fs::remove_all(dir);
        report(11, ok,
               "all 14 tables round trip bit-exactly through CSV and JSON; corrupted "
               "tables are rejected with the (2,3) counterexample",
               ok ? "" : bad);
    }

    std::cout << "acceptance: " << (11 - failures) << "/11 criteria passed\n";
    return failures;
}
