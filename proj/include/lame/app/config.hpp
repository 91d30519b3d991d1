#pragma once

// Run configuration: one strict JSON document. Unknown keys anywhere are an
// error, so a misspelt estimate option never silently falls back to a default.
//
// {
//   "grid":      {"n": 3, "N": 64, "L_side": 6.283185307179586},
//   "lame":      {"lambda": 1.0, "mu": 1.0},
//   "delta":     0.0,
//   "potential": {"type": "inverse_square" | "bounded_compact" | "file",
//                 "amplitude": 1.0, "epsilon": L_side/N, "radius": 1.0, "path": "..."},
//   "time":      {"T": 1.0, "M": 32},
//   "data":      {"family": "gaussian" | "bump" | "plane_wave", "seed": 1, "support_radius": 1.2},
//   "picard":    {"tol": 1e-8, "max_iter": 50},
//   "estimates": {"pairs": [[4, 4], ["inf", 2]], "p": 1.25, "delta_weight": (1+p)/2,
//                 "stride": 4, "radii": 0, "deltas": [0, 0.05, -0.05],
//                 "families": ["gaussian", "bump", "plane_wave"],
//                 "ceiling": null, "refinement_tolerance": 0.1},
//   "output":    {"trace": "trace.bin", "report": "report.csv"}
// }
//
// Every section and key is optional; the values above are the defaults.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lame/grid.hpp"
#include "lame/lame.hpp"
#include "lame/timegrid.hpp"
#include "lame/weights.hpp"
#include "lame/app/scenario.hpp"

namespace lame::app {

struct PotentialSpec {
  std::string type = "inverse_square";
  double amplitude = 1.0;
  std::optional<double> epsilon;  // default: L_side / N of the configured grid
  double radius = 1.0;            // bounded_compact only
  std::string path;               // file only
};

struct EstimateSpec {
  std::vector<std::pair<double, double>> pairs{{4.0, 4.0}, {kInf, 2.0}};
  double p = 1.25;
  std::optional<double> delta_weight;  // default (1 + p) / 2
  int stride = 4;
  int radii = 0;  // 0 keeps every dyadic radius
  std::vector<double> deltas{0.0, 0.05, -0.05};
  std::vector<std::string> families{"gaussian", "bump", "plane_wave"};
  std::optional<double> ceiling;
  double refinement_tolerance = 0.1;

  double weight_exponent() const { return delta_weight.value_or(0.5 * (1.0 + p)); }
};

struct OutputSpec {
  std::string trace;
  std::string report;
};

struct RunConfig {
  int n = 3;
  int N = 64;
  double L = 6.283185307179586;
  double lambda = 1.0;
  double mu = 1.0;
  double delta = 0.0;
  PotentialSpec potential;
  double T = 1.0;
  int M = 32;
  DataSpec data;
  double tol = 1e-8;
  int max_iter = 50;
  EstimateSpec estimates;
  OutputSpec output;

  Grid grid() const { return Grid::make(n, N, L); }
  Grid grid_at(int points) const { return Grid::make(n, points, L); }
  LameParams params() const { return LameParams::make(lambda, mu); }
  TimeGrid time() const { return TimeGrid::make(T, M); }
  double epsilon() const { return potential.epsilon.value_or(L / N); }

  /// Module-level invariants; throws Error(InvalidConfig / InvalidParameter).
  void validate() const;
  /// Finite-speed window T <= (L_side/2 - support_radius) / c_P.
  void validate_window() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical JSON of the effective configuration (defaults filled in).
std::string dump_config(const RunConfig& cfg);

/// Builds the configured potential on `grid` (epsilon stays the configured
/// physical length on every grid).
Potential make_potential(const RunConfig& cfg, const Grid& grid);

}  // namespace lame::app
