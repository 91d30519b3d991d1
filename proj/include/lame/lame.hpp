#pragma once

// Functional calculus of the Lame operator -Delta* = -mu Delta - (lambda+mu) grad div.
//
// Its symbol L(xi) = mu|xi|^2 I + (lambda+mu) xi xi^t has the two eigenvalues
// mu|xi|^2 (on xi-perp) and (lambda+2mu)|xi|^2 (on xi), so every function of
// sqrt(L) is applied in closed branch form
//
//   phi(sqrt L)(xi) = phi_S(|xi|) (I - P(xi)) + phi_P(|xi|) P(xi),  P = xi xi^t / |xi|^2,
//
// with phi_S and phi_P evaluated at the shear and pressure branches. No
// per-mode matrix decompositions are performed.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lame/grid.hpp"

namespace lame {

struct LameParams {
  double lambda = 1.0;
  double mu = 1.0;

  /// Rejects coefficients violating mu > 0, lambda + 2 mu > 0.
  static LameParams make(double lambda, double mu);

  double shear_speed() const;     // sqrt(mu)
  double pressure_speed() const;  // sqrt(lambda + 2 mu)
  double max_speed() const;
  double min_speed() const;
};

struct HelmholtzPair {
  Field solenoidal;  // divergence-free part f_S
  Field potential;   // gradient part f_P
};

/// Dense row-major n x n matrix (small, per-mode).
struct SmallMatrix {
  int n = 0;
  std::vector<double> a;
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }
};

SmallMatrix lame_symbol(std::span<const double> xi, const LameParams& params);

/// Branch symbol as a function of rho = |xi|.
using BranchSymbol = std::function<cplx(double rho)>;

/// phi_S(|xi|)(I - P) + phi_P(|xi|) P on every nonzero mode. The zero mode is
/// multiplied by `zero_mode` when given; otherwise by phi_S(0) when
/// phi_S(0) = phi_P(0) is finite, else annihilated.
Field apply_branch_multiplier(const Field& f, const BranchSymbol& phi_shear, const BranchSymbol& phi_pressure,
                              std::optional<cplx> zero_mode = std::nullopt);

/// sqrt(-Delta*). Zero mode annihilated.
Field symbol_sqrt_apply(const Field& f, const LameParams& params);
/// sqrt(-Delta*)^{-1}; the zero mode is annihilated by convention.
Field inv_symbol_sqrt_apply(const Field& g, const LameParams& params);

/// Helmholtz-Leray decomposition via the spectral projector P(xi). The zero
/// mode goes wholly to the solenoidal part.
HelmholtzPair leray_project(const Field& f);

struct CommutationReport {
  double scalar_commutator = 0.0;          // max over S/P of ||(m f)_X - m f_X||
  double counterexample_commutator = 0.0;  // same for diag(1, 2, 1, ...)
  double field_norm = 0.0;                 // ||f||_{L^2}
};
/// Checks that a scalar multiplier m(D) commutes with the Leray projectors and
/// that the fixed non-scalar matrix symbol diag(1, 2, 1, ...) does not.
CommutationReport commutation_check(const Field& f, const ScalarSymbol& m);

/// Delta* f as mu Delta f + (lambda + mu) grad div f.
Field apply_lame(const Field& f, const LameParams& params);
/// Delta* f as mu Delta f_S + (lambda + 2 mu) Delta f_P.
Field apply_lame_decoupled(const Field& f, const LameParams& params);

/// cos(t sqrt(-Delta*)) f.
Field cosine_propagator(const Field& f, double t, const LameParams& params);
/// sin(t sqrt(-Delta*)) sqrt(-Delta*)^{-1} g; zero mode annihilated.
Field sine_propagator(const Field& g, double t, const LameParams& params);
/// exp(i t sqrt(-Delta*)) f; identity on the zero mode.
Field exp_propagator(const Field& f, double t, const LameParams& params);

/// Scalar wave propagators cos(t sqrt(-c^2 Delta)) and
/// sin(t sqrt(-c^2 Delta)) / sqrt(-c^2 Delta), applied componentwise.
Field scalar_cosine(const Field& f, double t, double speed);
Field scalar_sine(const Field& g, double t, double speed);

}  // namespace lame
