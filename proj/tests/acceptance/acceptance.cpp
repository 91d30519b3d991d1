// Acceptance run: the full verification suite at the default configuration,
// summarized as one PASS/FAIL line per criterion. Usage:
//   lame_acceptance <config.json> <work-dir>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lame/error.hpp"
#include "lame/kernels.hpp"
#include "lame/log.hpp"
#include "lame/app/config.hpp"
#include "lame/app/report.hpp"
#include "lame/app/suites.hpp"

using namespace lame;
using namespace lame::app;
namespace fs = std::filesystem;

namespace {

using Records = std::vector<EstimateRecord>;

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

Records select(const Records& all, const std::function<bool(const EstimateRecord&)>& keep) {
  Records out;
  for (const auto& r : all)
    if (keep(r)) out.push_back(r);
  return out;
}

Records with_prefix(const Records& all, std::initializer_list<const char*> prefixes) {
  return select(all, [&](const EstimateRecord& r) {
    for (const char* p : prefixes)
      if (starts_with(r.name, p)) return true;
    return false;
  });
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

Verdict all_pass(const Records& rows, std::size_t expected_min) {
  Verdict v;
  int failed = 0;
  std::string first;
  for (const auto& r : rows)
    if (!r.pass) {
      if (!failed) {
        std::ostringstream os;
        os << record_label(r) << " N=" << r.info.N << " delta=" << r.info.delta << ": " << r.lhs << " vs "
           << r.rhs << " (ratio " << r.ratio << ", ceiling " << r.ceiling << ")";
        first = os.str();
      }
      ++failed;
    }
  std::ostringstream os;
  os << rows.size() << " rows";
  if (rows.size() < expected_min) {
    v.pass = false;
    os << ", expected at least " << expected_min;
  }
  if (failed) {
    v.pass = false;
    os << ", " << failed << " failed; first: " << first;
  }
  v.detail = os.str();
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string body(const std::string& csv) { return csv.substr(csv.find('\n') + 1); }

void report(int id, const std::string& title, const Verdict& v, int& failures) {
  std::cout << "criterion " << id << " " << (v.pass ? "PASS" : "FAIL") << "  " << title << "  [" << v.detail << "]"
            << std::endl;
  if (!v.pass) ++failures;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: lame_acceptance <config.json> <work-dir>\n";
    return 2;
  }
  warnings_enabled() = false;
  kernels::configure_threads_from_env();
  const fs::path work = argv[2];
  fs::create_directories(work);

  RunConfig cfg;
  try {
    cfg = load_config(argv[1]);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  Records rows;
  std::string crash;
  try {
    rows = run_suite(Suite::All, cfg);
  } catch (const std::exception& e) {
    crash = e.what();
  }
  const double minutes = std::chrono::duration<double>(clock::now() - t0).count() / 60.0;
  const fs::path first = work / "acceptance_run1.csv";
  write_report(first, rows);
  std::cout << "full suite: " << rows.size() << " rows in " << minutes << " min at n=" << cfg.n << " N=" << cfg.N
            << " M=" << cfg.M << " (" << kernels::max_threads() << " thread(s))" << std::endl;
  if (!crash.empty()) std::cout << "suite aborted: " << crash << std::endl;

  int failures = 0;
  report(1, "Helmholtz: Pythagoras, dual route, commutation, counterexample",
         all_pass(with_prefix(rows, {"helmholtz."}), 4), failures);
  report(2, "symbol: two routes, square root squared, norm sandwich", all_pass(with_prefix(rows, {"symbol."}), 4),
         failures);
  report(3, "propagators: dispersion, energy drift, isometry, group law, decoupled routes",
         all_pass(with_prefix(rows, {"propagator."}), 9), failures);
  report(4, "elliptic regularity: Riesz identity, unweighted and weighted ratios",
         all_pass(with_prefix(rows, {"elliptic."}), 6), failures);
  report(5, "Fefferman-Phong oracle for the regularized inverse square",
         all_pass(with_prefix(rows, {"fp.oracle_deviation", "fp.radius_spread"}), 2), failures);
  report(6, "Picard: free step, contraction, certificate, uniqueness, linearity",
         all_pass(with_prefix(rows, {"picard."}), 11), failures);

  {
    const std::set<std::string> checks{"helmholtz.", "symbol.", "propagator.", "elliptic.", "fp.", "weights.",
                                       "picard.", "order."};
    const Records est = select(rows, [&](const EstimateRecord& r) {
      for (const auto& c : checks)
        if (starts_with(r.name, c)) return false;
      return true;
    });
    Verdict v = all_pass(est, 1);
    // Every required record must exist for every family and delta.
    std::set<std::string> seen;
    for (const auto& r : est) {
      if (r.info.N != cfg.N || starts_with(r.name, "scale.") || starts_with(r.name, "refine.")) continue;
      std::string key = r.name;
      if (r.name == "Str") key += r.info.q == 4.0 ? "(4,4)" : "(inf,2)";
      seen.insert(key + "/" + r.info.family + "/" + std::to_string(r.info.delta));
    }
    const std::vector<std::string> per_delta{"Str(4,4)", "Str(inf,2)", "wei", "smoo", "weiinho", "smooinho", "propa1adj"};
    const std::vector<std::string> free_only{"weihomo", "weihomo'", "smoohom", "smoohom'"};
    int missing = 0;
    for (const auto& fam : cfg.estimates.families)
      for (double d : cfg.estimates.deltas) {
        for (const auto& n : per_delta) missing += !seen.count(n + "/" + fam + "/" + std::to_string(d));
        if (d == 0.0)
          for (const auto& n : free_only) missing += !seen.count(n + "/" + fam + "/" + std::to_string(d));
      }
    const bool endpoint = !with_prefix(rows, {"admissibility.endpoint"}).empty();
    if (missing || !endpoint) {
      v.pass = false;
      v.detail += ", " + std::to_string(missing) + " required records missing" + (endpoint ? "" : ", no endpoint row");
    }
    const std::size_t scale = with_prefix(rows, {"scale."}).size(), refine = with_prefix(rows, {"refine."}).size();
    v.detail += ", " + std::to_string(scale) + " scaling and " + std::to_string(refine) + " refinement rows";
    report(7, "estimate harness: finite, scale-invariant, refinement-stable ratios", v, failures);
  }
  report(8, "second-order convergence in M", all_pass(with_prefix(rows, {"order."}), 2), failures);

  {
    // Second identical run; the reports must agree byte for byte after the timestamp line.
    Records again;
    try {
      again = run_suite(Suite::All, cfg);
    } catch (const std::exception&) {
    }
    const fs::path second = work / "acceptance_run2.csv";
    write_report(second, again);
    const bool same = body(slurp(first)) == body(slurp(second));
    Verdict v;
    v.pass = same && minutes < 15.0 && crash.empty();
    std::ostringstream os;
    os << "reports " << (same ? "byte-identical" : "DIFFER") << " after the timestamp line; full suite took "
       << minutes << " min (limit 15)";
    v.detail = os.str();
    report(9, "reproducibility and runtime", v, failures);
  }

  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criterion(s) failed" : "acceptance: all criteria pass")
            << std::endl;
  return failures ? 1 : 0;
}
