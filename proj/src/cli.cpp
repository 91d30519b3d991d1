#include "lame/app/cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lame/error.hpp"
#include "lame/kernels.hpp"
#include "lame/solver.hpp"
#include "lame/app/report.hpp"
#include "lame/app/scenario.hpp"

namespace lame::app {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct SolveSummary {
  PicardReport report;
  double residual = 0.0;
};

SolveSummary solve_once(const RunConfig& cfg, const Grid& g, const Potential& V, const InitialData& d,
                        const TimeGrid& time, SolutionTrace* keep) {
  PicardConfig pc;
  pc.tol = cfg.tol;
  pc.max_iter = cfg.max_iter;
  pc.delta = cfg.delta;
  PicardResult r = picard_solve(d.f, d.g, V, pc, time, cfg.params());
  SolveSummary s{r.report, pde_residual(r.trace, &V, cfg.delta, cfg.params())};
  (void)g;
  if (keep) *keep = std::move(r.trace);
  return s;
}

double total_energy(const SolutionTrace& tr, std::size_t k, const Potential& V, double delta, const LameParams& p) {
  double e = elastic_energy(tr.u[k], tr.dtu[k], p);
  if (delta != 0.0) e += delta * inner_product(V.apply(tr.u[k]), tr.u[k]).real();
  return e;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return out;
}

double sweep_x(const EstimateRecord& r, const std::string& param, double value) {
  if (param == "delta") return r.info.delta;
  if (param == "N") return r.info.N;
  if (param == "p") return r.info.p;
  return value;
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& os) {
  const Grid g = cfg.grid();
  const LameParams p = cfg.params();
  const TimeGrid time = cfg.time();
  const Potential V = make_potential(cfg, g);
  const InitialData d = make_data(g, cfg.data);

  SolutionTrace trace;
  const SolveSummary s = solve_once(cfg, g, V, d, time, &trace);
  const SolveSummary fine = solve_once(cfg, g, V, d, TimeGrid::make(cfg.T, 2 * cfg.M), nullptr);

  const double e0 = total_energy(trace, 0, V, cfg.delta, p);
  double drift = 0.0;
  for (std::size_t k = 1; k < trace.u.size(); ++k)
    drift = std::max(drift, std::abs(total_energy(trace, k, V, cfg.delta, p) / e0 - 1.0));

  write_trace(out, trace);

  os << "grid          n=" << g.n << " N=" << g.N << " L_side=" << fmt(g.L) << "\n";
  os << "lame          lambda=" << fmt(p.lambda) << " mu=" << fmt(p.mu) << " c_S=" << fmt(p.shear_speed())
     << " c_P=" << fmt(p.pressure_speed()) << "\n";
  os << "potential     " << V.label() << " delta=" << fmt(cfg.delta) << "\n";
  os << "data          " << d.f.grid().n << "-d " << cfg.data.family << " seed=" << cfg.data.seed << "\n";
  os << "time          T=" << fmt(cfg.T) << " M=" << cfg.M << "\n";
  const PicardReport& rep = s.report;
  os << "picard        iterations=" << rep.iterations << " converged=" << (rep.converged ? "yes" : "no")
     << " contraction_ratio=" << fmt(rep.contraction_ratio) << " first_correction=" << fmt(rep.first_correction)
     << "\n";
  for (std::size_t m = 0; m < rep.differences.size(); ++m) {
    os << "  step " << m + 1 << "  diff=" << fmt(rep.differences[m]);
    if (m > 0 && m - 1 < rep.ratios.size()) os << "  ratio=" << fmt(rep.ratios[m - 1]);
    os << "\n";
  }
  os << "energy drift  " << fmt(drift) << (cfg.delta != 0.0 ? " (elastic + delta <Vu,u>)" : "") << "\n";
  os << "residual      M=" << cfg.M << ": " << fmt(s.residual) << "  M=" << 2 * cfg.M << ": " << fmt(fine.residual);
  if (s.residual > 0.0 && fine.residual > 0.0) os << "  observed order " << fmt(std::log2(s.residual / fine.residual));
  os << "\n";
  os << "trace         " << out.string() << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, Suite suite, const std::filesystem::path& report, std::ostream& os,
               std::ostream& err) {
  if ((suite == Suite::All || suite == Suite::Estimates) && cfg.estimates.pairs.empty())
    throw Error(ErrorKind::InvalidConfig, "estimates.pairs is empty: nothing to verify");
  const std::vector<EstimateRecord> records = run_suite(suite, cfg);
  write_report(report, records);
  int failed = 0, rejected = 0;
  for (const auto& r : records) {
    if (r.name == "rejected_pair") {
      ++rejected;
      os << "note: pair (q, r) = (" << fmt(r.info.q) << ", " << fmt(r.info.r) << ") is not admissible with q > 2; skipped\n";
    }
    if (!r.pass) {
      ++failed;
      err << "FAIL " << record_label(r) << " N=" << r.info.N << " delta=" << fmt(r.info.delta) << " ratio=" << fmt(r.ratio)
          << " ceiling=" << fmt(r.ceiling) << "\n";
    }
  }
  os << suite_name(suite) << ": " << records.size() << " records, " << failed << " failed";
  if (rejected) os << ", " << rejected << " pair(s) rejected";
  os << "; report " << report.string() << "\n";
  return failed ? kExitCheckFailed : kExitOk;
}

RunConfig with_sweep_value(const RunConfig& cfg, const std::string& param, double value) {
  RunConfig c = cfg;
  if (param == "delta") {
    c.delta = value;
    c.estimates.deltas = {value};
  } else if (param == "N") {
    if (value != std::floor(value)) throw Error(ErrorKind::InvalidConfig, "N values must be integers");
    c.N = static_cast<int>(value);
    c.potential.epsilon = cfg.epsilon();
  } else if (param == "epsilon") {
    c.potential.epsilon = value;
  } else if (param == "p") {
    c.estimates.p = value;
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown sweep parameter '" + param + "' (delta, N, epsilon, p)");
  }
  c.validate();
  return c;
}

int cmd_sweep(const RunConfig& cfg, const std::string& param, const std::vector<double>& values,
              const std::filesystem::path& report, std::ostream& os) {
  if (values.empty()) throw Error(ErrorKind::InvalidConfig, "no sweep values");
  std::vector<RunConfig> runs;
  for (double v : values) runs.push_back(with_sweep_value(cfg, param, v));

  std::vector<EstimateRecord> all;
  std::vector<std::size_t> value_of;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (auto& r : estimate_records(runs[i], runs[i].N)) {
      all.push_back(std::move(r));
      value_of.push_back(i);
    }
    os << param << "=" << fmt(values[i]) << " done\n";
  }
  write_report(report, all);

  // One plot per estimate (and pair), one curve per family (and delta).
  std::map<std::string, std::map<std::string, Series>> plots;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const EstimateRecord& r = all[i];
    if (r.name == "rejected_pair") continue;
    std::string key = r.name;
    if (r.name == "Str") key += "(" + fmt(r.info.q) + "," + fmt(r.info.r) + ")";
    std::string curve = r.info.family.empty() ? "all" : r.info.family;
    if (param != "delta" && !std::isnan(r.info.delta)) curve += " delta=" + fmt(r.info.delta);
    Series& s = plots[key][curve];
    s.label = curve;
    s.x.push_back(sweep_x(r, param, values[value_of[i]]));
    s.y.push_back(r.ratio);
  }
  std::filesystem::path dir = report.parent_path();
  const std::string stem = report.stem().string();
  for (const auto& [key, curves] : plots) {
    std::vector<Series> series;
    for (const auto& [label, s] : curves) series.push_back(s);
    const std::string y = key == "picard_iterations" ? "iterations" : key == "fp_norm" ? "norm" : "ratio";
    const std::filesystem::path path = dir / (stem + "_" + sanitize(key) + ".svg");
    std::ofstream svg(path);
    if (!svg) throw Error(ErrorKind::Io, "cannot write " + path.string());
    svg << svg_plot(key + " vs " + param, param, y, series, false);
  }
  os << "sweep over " << param << ": " << all.size() << " records, " << plots.size() << " plots; report "
     << report.string() << "\n";
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& os, std::ostream& err) {
  CLI::App app{"Lame wave solver and estimate verification harness", "lame"};
  app.require_subcommand(1);

  std::string config, out, report, suite = "all", param, values;
  auto* solve = app.add_subcommand("solve", "solve the configured problem and write a trace file");
  solve->add_option("--config", config, "JSON run configuration")->required();
  solve->add_option("--out", out, "trace output path (default: output.trace)");

  auto* verify = app.add_subcommand("verify", "run a verification suite and write CSV/JSON reports");
  verify->add_option("--config", config, "JSON run configuration")->required();
  verify->add_option("--suite", suite, "all | helmholtz | propagators | weights | solver | estimates");
  verify->add_option("--report", report, "CSV report path (default: output.report)");

  auto* sweep = app.add_subcommand("sweep", "estimate records over a parameter range, with SVG plots");
  sweep->add_option("--config", config, "JSON run configuration")->required();
  sweep->add_option("--param", param, "delta | N | epsilon | p")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--report", report, "CSV report path (default: output.report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      os << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    kernels::configure_threads_from_env();
    const RunConfig cfg = load_config(config);
    auto pick = [&](const std::string& flag, const std::string& fallback, const char* what) {
      const std::string p = flag.empty() ? fallback : flag;
      if (p.empty()) throw Error(ErrorKind::InvalidConfig, std::string("no ") + what + " path given");
      return std::filesystem::path(p);
    };
    if (solve->parsed()) return cmd_solve(cfg, pick(out, cfg.output.trace, "trace output"), os);
    if (verify->parsed()) {
      const auto s = parse_suite(suite);
      if (!s) throw Error(ErrorKind::InvalidConfig, "unknown suite '" + suite + "'");
      return cmd_verify(cfg, *s, pick(report, cfg.output.report, "report"), os, err);
    }
    std::vector<double> vals;
    std::stringstream ss(values);
    for (std::string item; std::getline(ss, item, ',');) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidConfig, "bad sweep value '" + item + "'");
      }
    }
    return cmd_sweep(cfg, param, vals, pick(report, cfg.output.report, "report"), os);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what();
    if (e.value()) err << " (contraction ratio " << fmt(*e.value()) << ")";
    err << "\n";
    if (e.kind() == ErrorKind::NoContraction || e.kind() == ErrorKind::NonConvergence) return kExitNoContraction;
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace lame::app
