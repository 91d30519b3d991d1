#pragma once

// Matrix potentials, Fefferman-Phong norms, Hardy-Littlewood maximal weights,
// Muckenhoupt constants and the Riesz-transform elliptic regularity tools.
//
// Balls are open balls in the periodic distance with cell-centre membership;
// ball integrals are cell sums times h^n. Every sup over balls is a maximum
// over a finite sampling (centres on a stride, dyadic radii) and hence a
// lower bound of the continuum quantity.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lame/grid.hpp"
#include "lame/lame.hpp"

namespace lame {

class Potential {
 public:
  /// `values` holds n*n reals per grid point, [point][row][col].
  Potential(const Grid& grid, std::vector<double> values, double epsilon, std::string label);

  const Grid& grid() const { return grid_; }
  double epsilon() const { return epsilon_; }
  const std::string& label() const { return label_; }
  std::span<const double> matrix(std::size_t flat) const;
  std::span<const double> values() const { return values_; }

  /// Frobenius norm |V|(x).
  RealField magnitude() const;
  /// Pointwise V(x) u(x); physical result.
  Field apply(const Field& u) const;
  Potential scaled(double c) const;

  double p() const { return p_; }
  std::optional<double> fp_norm_estimate() const { return fp_norm_; }
  void set_fp_norm(double p, double value) {
    p_ = p;
    fp_norm_ = value;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
  double epsilon_ = 0.0;
  std::string label_;
  double p_ = 1.25;
  std::optional<double> fp_norm_;
};

struct BallSampling {
  std::vector<std::size_t> centers;
  std::vector<double> radii;

  /// Centres on every `stride`-th cell per axis (always including the
  /// origin), radii 2^k h up to L/2. `max_radii > 0` keeps that many of the
  /// largest radii.
  static BallSampling dyadic(const Grid& grid, int stride = 1, int max_radii = 0);
};

/// amplitude (d(x,0)^2 + eps^2)^{-1} I_n with d the periodic distance.
Potential inverse_square_potential(const Grid& grid, double epsilon, double amplitude);
/// amplitude * bump(d(x,0)/radius) * I_n, bump(s) = exp(1 - 1/(1 - s^2)) on s < 1.
Potential bounded_compact_potential(const Grid& grid, double radius, double amplitude);
/// "LAMEPOT1" | u32 n | u32 N | f64 L | n*n arrays of N^n f64, entry (i,j) row-major.
Potential read_potential(const std::filesystem::path& path);
void write_potential(const std::filesystem::path& path, const Potential& V);

// ---- ball machinery (OpenMP kernels; serial references live in lame::reference)

/// Lattice offsets inside the open periodic ball of radius r.
std::vector<std::vector<int>> ball_offsets(const Grid& grid, double r);
std::size_t ball_count(const Grid& grid, double r);
/// S(x) = sum_{d(x,y) < r} phi(y) for every centre x, via FFT convolution.
RealField ball_sums(const RealField& phi, double r);
/// min_{d(x,y) < r} phi(y) at the given centres, by direct scan.
std::vector<double> ball_minima(const RealField& phi, double r, std::span<const std::size_t> centers);

double fefferman_phong_norm(const Potential& V, double p, const BallSampling& sampling);
double fefferman_phong_norm(const RealField& magnitude, double p, const BallSampling& sampling);
/// Per-radius value r^{2-n/p} (int_{B(x,r)} |V|^p)^{1/p} at one centre.
std::vector<double> fefferman_phong_profile(const RealField& magnitude, double p, std::size_t center,
                                            std::span<const double> radii);

/// M(phi)(x) = max over the radii (and the singleton cell) of ball averages.
RealField maximal_function(const RealField& phi, std::span<const double> radii);
/// W = M(|V|^delta)^{1/delta}, 1 < delta < V.p().
RealField build_weight(const Potential& V, double delta, std::span<const double> radii);

double a2_constant(const RealField& w, const BallSampling& sampling);
double a1_constant(const RealField& w, const BallSampling& sampling);

/// psi with -Laplacian psi = div F, mean zero (scalar field).
Field solve_poisson_div(const Field& F);
/// (F_S, F_P) = (F + grad psi, -grad psi).
HelmholtzPair helmholtz_via_poisson(const Field& F);
/// sum_k R_j R_k F_k for every j (the Riesz route to grad psi).
Field riesz_gradient(const Field& F);
/// ||grad psi||_{L^2(W^s)} / ||F||_{L^2(W^s)}, s = +1 or -1.
double elliptic_regularity_ratio(const Field& F, const RealField& W, int sign);

}  // namespace lame
