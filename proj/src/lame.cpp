#include "lame/lame.hpp"

#include <atomic>
#include <cmath>

#include "lame/error.hpp"
#include "lame/kernels.hpp"

namespace lame {

LameParams LameParams::make(double lambda, double mu) {
  if (!std::isfinite(lambda) || !std::isfinite(mu))
    throw Error(ErrorKind::InvalidParameter, "Lame coefficients must be finite");
  if (!(mu > 0.0) || !(lambda + 2.0 * mu > 0.0))
    throw Error(ErrorKind::InvalidParameter,
                "Lame coefficients violate ellipticity (need mu > 0 and lambda + 2 mu > 0)");
  return LameParams{lambda, mu};
}

double LameParams::shear_speed() const { return std::sqrt(mu); }
double LameParams::pressure_speed() const { return std::sqrt(lambda + 2.0 * mu); }
double LameParams::max_speed() const { return std::max(shear_speed(), pressure_speed()); }
double LameParams::min_speed() const { return std::min(shear_speed(), pressure_speed()); }

SmallMatrix lame_symbol(std::span<const double> xi, const LameParams& params) {
  const int n = static_cast<int>(xi.size());
  SmallMatrix m{n, std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
  double xi2 = 0.0;
  for (double x : xi) xi2 += x * x;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.a[static_cast<std::size_t>(i * n + j)] =
          (i == j ? params.mu * xi2 : 0.0) + (params.lambda + params.mu) * xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)];
  return m;
}

namespace {

/// Spectral-domain branch kernel: out = a_S (v - P v) + a_P P v per mode.
template <class Coeffs>
void branch_kernel(Field& s, Coeffs&& coeffs) {
  const Grid& g = s.grid();
  const auto& tab = spectral_tables(g);
  const int n = g.n;
  kernels::parallel_for(g.size(), [&](std::size_t flat) {
    const double xi2 = tab.xi2[flat];
    const auto [a_s, a_p] = coeffs(flat);
    if (xi2 == 0.0) {
      for (int d = 0; d < n; ++d) s.at(d, flat) *= a_s;
      return;
    }
    cplx dot{};
    for (int d = 0; d < n; ++d) dot += tab.component(d, flat) * s.at(d, flat);
    dot /= xi2;
    for (int d = 0; d < n; ++d) {
      const cplx p = tab.component(d, flat) * dot;
      s.at(d, flat) = a_s * (s.at(d, flat) - p) + a_p * p;
    }
  });
}

Field restore(Field s, Representation rep) {
  return rep == Representation::Physical ? to_physical(std::move(s)) : s;
}

void require_vector(const Field& f) {
  if (!f.is_vector()) throw Error(ErrorKind::ContractViolation, "vector field with grid.n components required");
}

struct Pair {
  cplx s;
  cplx p;
};

}  // namespace

Field apply_branch_multiplier(const Field& f, const BranchSymbol& phi_shear, const BranchSymbol& phi_pressure,
                              std::optional<cplx> zero_mode) {
  require_vector(f);
  cplx zero{};
  if (zero_mode) {
    zero = *zero_mode;
  } else {
    const cplx s0 = phi_shear(0.0);
    const cplx p0 = phi_pressure(0.0);
    const bool finite = std::isfinite(s0.real()) && std::isfinite(s0.imag());
    zero = (finite && s0 == p0) ? s0 : cplx{};
  }
  const auto& tab = spectral_tables(f.grid());
  std::atomic<bool> singular{false};
  Field s = to_spectral(f);
  branch_kernel(s, [&](std::size_t flat) -> Pair {
    const double rho = tab.abs_xi[flat];
    if (rho == 0.0) return {zero, zero};
    const cplx a = phi_shear(rho);
    const cplx b = phi_pressure(rho);
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !std::isfinite(b.real()) || !std::isfinite(b.imag())) {
      singular.store(true, std::memory_order_relaxed);
      return {0.0, 0.0};
    }
    return {a, b};
  });
  if (singular.load()) throw Error(ErrorKind::MultiplierSingularity, "branch multiplier is not finite on an active mode");
  return restore(std::move(s), f.representation());
}

Field symbol_sqrt_apply(const Field& f, const LameParams& params) {
  const double cs = params.shear_speed();
  const double cp = params.pressure_speed();
  return apply_branch_multiplier(f, [cs](double r) -> cplx { return cs * r; },
                                 [cp](double r) -> cplx { return cp * r; }, cplx{});
}

Field inv_symbol_sqrt_apply(const Field& g, const LameParams& params) {
  const double cs = params.shear_speed();
  const double cp = params.pressure_speed();
  return apply_branch_multiplier(g, [cs](double r) -> cplx { return 1.0 / (cs * r); },
                                 [cp](double r) -> cplx { return 1.0 / (cp * r); }, cplx{});
}

HelmholtzPair leray_project(const Field& f) {
  require_vector(f);
  const Grid& g = f.grid();
  const auto& tab = spectral_tables(g);
  const int n = g.n;
  Field sol = to_spectral(f);
  Field pot = Field::vector(g, Representation::Spectral);
  kernels::parallel_for(g.size(), [&](std::size_t flat) {
    const double xi2 = tab.xi2[flat];
    if (xi2 == 0.0) return;
    cplx dot{};
    for (int d = 0; d < n; ++d) dot += tab.component(d, flat) * sol.at(d, flat);
    dot /= xi2;
    for (int d = 0; d < n; ++d) {
      const cplx p = tab.component(d, flat) * dot;
      pot.at(d, flat) = p;
      sol.at(d, flat) -= p;
    }
  });
  return {restore(std::move(sol), f.representation()), restore(std::move(pot), f.representation())};
}

CommutationReport commutation_check(const Field& f, const ScalarSymbol& m) {
  require_vector(f);
  CommutationReport rep;
  rep.field_norm = l2_norm(f);

  const HelmholtzPair parts = leray_project(f);
  const HelmholtzPair of_mf = leray_project(apply_scalar_multiplier(f, m));
  const double ds = l2_norm(of_mf.solenoidal - apply_scalar_multiplier(parts.solenoidal, m));
  const double dp = l2_norm(of_mf.potential - apply_scalar_multiplier(parts.potential, m));
  rep.scalar_commutator = std::max(ds, dp);

  if (f.grid().n >= 2) {
    // M = diag(1, 2, 1, ...): a constant symbol acts pointwise.
    auto apply_diag = [](Field x) {
      for (auto& v : x.component(1)) v *= 2.0;
      return x;
    };
    const HelmholtzPair of_Mf = leray_project(apply_diag(f));
    const double cs = l2_norm(of_Mf.solenoidal - apply_diag(parts.solenoidal));
    const double cp = l2_norm(of_Mf.potential - apply_diag(parts.potential));
    rep.counterexample_commutator = std::max(cs, cp);
  }
  return rep;
}

Field apply_lame(const Field& f, const LameParams& params) {
  require_vector(f);
  const Grid& g = f.grid();
  const auto& tab = spectral_tables(g);
  const int n = g.n;
  Field s = to_spectral(f);
  kernels::parallel_for(g.size(), [&](std::size_t flat) {
    cplx dot{};
    for (int d = 0; d < n; ++d) dot += tab.component(d, flat) * s.at(d, flat);
    const double xi2 = tab.xi2[flat];
    for (int d = 0; d < n; ++d)
      s.at(d, flat) = -params.mu * xi2 * s.at(d, flat) - (params.lambda + params.mu) * tab.component(d, flat) * dot;
  });
  return restore(std::move(s), f.representation());
}

Field apply_lame_decoupled(const Field& f, const LameParams& params) {
  const HelmholtzPair parts = leray_project(f);
  return laplacian(parts.solenoidal) * params.mu + laplacian(parts.potential) * (params.lambda + 2.0 * params.mu);
}

Field cosine_propagator(const Field& f, double t, const LameParams& params) {
  const double cs = params.shear_speed() * t;
  const double cp = params.pressure_speed() * t;
  return apply_branch_multiplier(f, [cs](double r) -> cplx { return std::cos(cs * r); },
                                 [cp](double r) -> cplx { return std::cos(cp * r); }, cplx{1.0});
}

Field sine_propagator(const Field& g, double t, const LameParams& params) {
  const double cs = params.shear_speed();
  const double cp = params.pressure_speed();
  return apply_branch_multiplier(g, [cs, t](double r) -> cplx { return std::sin(cs * t * r) / (cs * r); },
                                 [cp, t](double r) -> cplx { return std::sin(cp * t * r) / (cp * r); }, cplx{});
}

Field exp_propagator(const Field& f, double t, const LameParams& params) {
  const double cs = params.shear_speed() * t;
  const double cp = params.pressure_speed() * t;
  return apply_branch_multiplier(f, [cs](double r) { return std::polar(1.0, cs * r); },
                                 [cp](double r) { return std::polar(1.0, cp * r); }, cplx{1.0});
}

Field scalar_cosine(const Field& f, double t, double speed) {
  return apply_scalar_multiplier(f, [=](std::span<const double>, double r) -> cplx { return std::cos(speed * t * r); });
}

Field scalar_sine(const Field& g, double t, double speed) {
  return apply_scalar_multiplier(g, [=](std::span<const double>, double r) -> cplx {
    return r == 0.0 ? cplx{} : cplx(std::sin(speed * t * r) / (speed * r));
  });
}

}  // namespace lame
