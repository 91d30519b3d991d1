#pragma once

// Bound ratios lhs / rhs for the dispersive, weighted and local-smoothing
// estimates of the perturbed Lame wave flow. Every time integral runs over the
// sampled window; ratios are homogeneous of degree zero in the data.

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lame/grid.hpp"
#include "lame/lame.hpp"
#include "lame/solver.hpp"
#include "lame/weights.hpp"

namespace lame {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// sigma = 1/q + n/r - (n-1)/2 when 2 <= q <= inf, 2 <= r < inf and
/// 2/q + (n-1)/r <= (n-1)/2; empty otherwise. q = inf is kInf.
std::optional<double> admissible(double q, double r, int n);

struct AdmissiblePair {
  double q = 4.0;
  double r = 4.0;
  double sigma = 0.0;
  int n = 3;

  /// Admissible and q > 2; throws InvalidExponent otherwise.
  static AdmissiblePair make(double q, double r, int n);
};

struct ScenarioInfo {
  int n = 3;
  int N = 0;
  double L = 0.0;
  double lambda = 1.0;
  double mu = 1.0;
  double delta = 0.0;
  std::string potential = "none";
  double p = kNaN;
  double q = kNaN;
  double r = kNaN;
  double sigma = kNaN;
  std::string family;  // data family label (not part of the CSV columns)

  static ScenarioInfo of(const Grid& grid, const LameParams& params, double delta, std::string potential, double p);
  ScenarioInfo with_pair(const AdmissiblePair& pair) const;
};

struct EstimateRecord {
  std::string name;
  ScenarioInfo info;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double ceiling = kInf;
  bool pass = false;

  /// ratio = lhs / rhs; rhs <= 0 (or not finite) throws DegenerateInput.
  static EstimateRecord make(std::string name, ScenarioInfo info, double lhs, double rhs);
};

struct DataNorms {
  double f_half = 0.0;      // ||f||_{H^{1/2}}
  double g_neg_half = 0.0;  // ||g||_{H^{-1/2}}

  static DataNorms of(const Field& f, const Field& g);
  double sum() const { return f_half + g_neg_half; }
  double sum_sq() const { return f_half * f_half + g_neg_half * g_neg_half; }
};

/// (sum_k w_k || |grad|^sigma u(t_k) ||_{L^r}^q)^{1/q} over ||f|| + ||g||.
EstimateRecord strichartz_ratio(const SolutionTrace& trace, const AdmissiblePair& pair, const DataNorms& norms,
                                const ScenarioInfo& info);

/// ||u||_{L^2_{x,t}(|V|)} over ||V||_{F^p}^{1/2} (||f|| + ||g||).
EstimateRecord weighted_l2_ratio(const SolutionTrace& trace, const Potential& V, const DataNorms& norms,
                                 const ScenarioInfo& info);

/// weihomo, weihomo', cosW, sinW (records for zero data are skipped).
std::vector<EstimateRecord> free_weighted_ratios(const Field& f, const Field& g, const Potential& V,
                                                 const TimeGrid& time, const LameParams& params,
                                                 const ScenarioInfo& info);

struct LocalEnergyRow {
  double radius = 0.0;
  std::size_t center = 0;  // flat index of the maximizing centre
  double value = 0.0;      // (1/R) int_B int |.|^2
};
struct LocalEnergyResult {
  double sup = 0.0;
  std::vector<LocalEnergyRow> rows;  // one per sampled radius
};

/// sup over sampled balls of (1/R) int_B of a time-integrated density.
LocalEnergyResult local_energy_from_density(const RealField& density, const BallSampling& sampling);

/// Local energy with |(1 - Delta)^{1/4} u|^2 + |(1 - Delta)^{-1/4} u_t|^2
/// integrated over [-T, T]; `backward` is the trace with data (f, -g).
LocalEnergyResult local_energy(const SolutionTrace& forward, const SolutionTrace& backward,
                               const BallSampling& sampling);
/// Time-integrated density of |(1 - Delta)^{1/4} u|^2 + |(1 - Delta)^{-1/4} u_t|^2 over [0, T].
RealField local_energy_density(const SolutionTrace& trace);

/// smoohom (f) and smoohom' (g): | |grad|^{1/2} e^{i t sqrt(-Delta*)} . |^2 on [-T, T].
std::vector<EstimateRecord> local_smoothing_free(const Field& f, const Field& g, const BallSampling& sampling,
                                                 const TimeGrid& time, const LameParams& params,
                                                 const ScenarioInfo& info);

/// weiinho and smooinho for u = Duhamel(F) with zero data.
std::vector<EstimateRecord> inhomogeneous_ratios(std::span<const Field> F, const Potential& V, const TimeGrid& time,
                                                 const LameParams& params, const BallSampling& sampling,
                                                 const ScenarioInfo& info);

/// int_0^T e^{-i s sqrt(-Delta*)} F(s) ds, trapezoid in s (physical result).
Field dual_propagator_integral(std::span<const Field> F, const TimeGrid& time, const LameParams& params);
/// propa1adj: ||int e^{-is sqrt(-Delta*)} F||_{H^{-1/2}} over ||V||^{1/2} ||F||_{L^2_{x,t}(|V|^{-1})}.
EstimateRecord dual_propagator_ratio(std::span<const Field> F, const Potential& V, const TimeGrid& time,
                                     const LameParams& params, const ScenarioInfo& info);

/// ||f||_{L^q} / ||f||_{H^{1/2}} with q = 2n/(n-1) enforced.
EstimateRecord sobolev_embedding_check(const Field& f, double q, int n, const ScenarioInfo& info);

}  // namespace lame
