#pragma once

// Free and perturbed solutions of  u_tt - Delta* u + delta V u = 0.
//
// Every solution is a trace of samples at t_k = k T / M. The free part is
// evaluated exactly per Fourier mode; Duhamel integrals
//
//   int_0^t sin((t-s) sqrt(-Delta*)) sqrt(-Delta*)^{-1} F(s) ds
//
// use the trapezoid rule in s on the exact propagator. Per mode and branch
// (omega = c_b |xi|) the integrand splits as
//   sin(omega t) cos(omega s) - cos(omega t) sin(omega s),
// so two running sums give every u(t_k) in O(M) transforms instead of O(M^2).
// The zero mode uses the omega -> 0 limit (t - s).

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lame/grid.hpp"
#include "lame/lame.hpp"
#include "lame/timegrid.hpp"
#include "lame/weights.hpp"

namespace lame {

struct TraceMetadata {
  LameParams params;
  std::string potential = "none";
  double delta = 0.0;
  double f_norm = 0.0;  // ||f||_{H^{1/2}} (homogeneous)
  double g_norm = 0.0;  // ||g||_{H^{-1/2}} (homogeneous)
};

/// u and u_t sampled at t_0..t_M, physical representation.
struct SolutionTrace {
  TimeGrid time;
  std::vector<Field> u;
  std::vector<Field> dtu;
  TraceMetadata meta;

  const Grid& grid() const { return u.front().grid(); }
};

enum class InitialIterate { Free, Zero };

struct PicardConfig {
  double tol = 1e-8;
  int max_iter = 50;
  double delta = 0.0;
  InitialIterate initial = InitialIterate::Free;
  bool compute_dtu = true;

  void validate() const;
};

struct PicardReport {
  int iterations = 0;
  std::vector<double> differences;  // ||u^{m+1} - u^m||_{L^2_{x,t}(|V|)}
  std::vector<double> norms;        // ||u^m||_{L^2_{x,t}(|V|)}
  std::vector<double> ratios;       // differences[m] / differences[m-1]
  double contraction_ratio = 0.0;   // last observed ratio (0 when undefined)
  double first_correction = 0.0;    // differences[0]
  bool converged = false;
};

/// Per-mode running sums for the trapezoidal Duhamel integral.
class DuhamelAccumulator {
 public:
  DuhamelAccumulator(const Grid& grid, const LameParams& params);

  void reset();
  /// Adds the source sample `src` (spectral vector field) at time s with
  /// quadrature weight tau.
  void add(const Field& src, double s, double tau);
  /// Duhamel integral at time t over the sources added so far (spectral).
  Field value(double t) const;
  /// Its time derivative int cos((t-s) sqrt(-Delta*)) F(s) ds (spectral).
  Field derivative(double t) const;

 private:
  Grid grid_;
  LameParams params_;
  CVector cs_, ss_, cp_, sp_;
};

SolutionTrace free_solution(const Field& f, const Field& g, const TimeGrid& time, const LameParams& params);

/// Duhamel integral at t_index from the samples F(t_0..t_M) (means projected out).
Field duhamel(std::span<const Field> F, const TimeGrid& time, const LameParams& params, int t_index);
/// Same for every t_k in one streaming pass.
std::vector<Field> duhamel_all(std::span<const Field> F, const TimeGrid& time, const LameParams& params);

struct PicardResult {
  SolutionTrace trace;
  PicardReport report;
};

/// Iterates u = cos f + sin g + T u, with T u the Duhamel integral of the
/// source -delta V u. Throws NoContraction or NonConvergence.
PicardResult picard_solve(const Field& f, const Field& g, const Potential& V, const PicardConfig& config,
                          const TimeGrid& time, const LameParams& params);

/// u_t from the displayed representation: cos g - sin sqrt(-Delta*) f plus the
/// cosine Duhamel integral of the source, trapezoid in s.
std::vector<Field> time_derivative_trace(const Field& f, const Field& g, const Potential* V, double delta,
                                         const SolutionTrace& trace, const LameParams& params);

struct FixedPointResidual {
  double difference = 0.0;  // ||u - A u||_{L^2_{x,t}(|V|)}
  double norm = 0.0;        // ||u||_{L^2_{x,t}(|V|)}
};
FixedPointResidual fixed_point_residual(const SolutionTrace& trace, const Field& f, const Field& g, const Potential& V,
                                        double delta, const LameParams& params);

/// max over interior t_k of ||D_t^2 u - Delta* u + delta V u|| / ||u||.
double pde_residual(const SolutionTrace& trace, const Potential* V, double delta, const LameParams& params);

/// ||u_t||^2 + mu ||grad u_S||^2 + (lambda + 2 mu) ||grad u_P||^2.
double elastic_energy(const Field& u, const Field& dtu, const LameParams& params);

/// L^2_{x,t}(w) norm of a trace over [0, T] (trapezoid in t).
double trace_weighted_norm(std::span<const Field> samples, const RealField& w, const TimeGrid& time);

/// "LAMETRC1" | grid header | u32 M | f64 T | per sample: u payload, u_t payload.
void write_trace(const std::filesystem::path& path, const SolutionTrace& trace);
SolutionTrace read_trace(const std::filesystem::path& path);

}  // namespace lame
