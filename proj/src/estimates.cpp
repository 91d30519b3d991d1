#include "lame/estimates.hpp"

#include <cmath>

#include "lame/error.hpp"
#include "lame/kernels.hpp"

namespace lame {

namespace {

constexpr double kSlack = 1e-12;

double require_fp(const Potential& V) {
  const auto fp = V.fp_norm_estimate();
  if (!fp) throw Error(ErrorKind::ContractViolation, "potential carries no Fefferman-Phong norm estimate");
  return *fp;
}

double trapezoid(const TimeGrid& time, int k) {
  return (k == 0 || k == time.M) ? 0.5 * time.dt() : time.dt();
}

void accumulate(RealField& density, const Field& f, double weight) {
  const RealField p = pointwise_norm2(f);
  kernels::parallel_for(density.values.size(), [&](std::size_t i) { density.values[i] += weight * p.values[i]; });
}

RealField reciprocal(const RealField& w) {
  RealField out(w.grid);
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    if (!(w.values[i] > 0.0)) throw Error(ErrorKind::InvalidWeight, "|V|^{-1} needs |V| > 0 everywhere");
    out.values[i] = 1.0 / w.values[i];
  }
  return out;
}

}  // namespace

std::optional<double> admissible(double q, double r, int n) {
  if (!(q >= 2.0) || !(r >= 2.0) || !std::isfinite(r) || n < 2) return std::nullopt;
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  const double half = 0.5 * (n - 1);
  if (2.0 * inv_q + (n - 1) / r > half + kSlack) return std::nullopt;
  double sigma = inv_q + n / r - half;
  if (std::abs(sigma) < kSlack) sigma = 0.0;
  return sigma;
}

AdmissiblePair AdmissiblePair::make(double q, double r, int n) {
  const auto sigma = admissible(q, r, n);
  if (!sigma) throw Error(ErrorKind::InvalidExponent, "(q, r) is not wave-admissible");
  if (!(q > 2.0)) throw Error(ErrorKind::InvalidExponent, "the Strichartz harness requires q > 2");
  return AdmissiblePair{q, r, *sigma, n};
}

ScenarioInfo ScenarioInfo::of(const Grid& grid, const LameParams& params, double delta, std::string potential,
                              double p) {
  ScenarioInfo s;
  s.n = grid.n;
  s.N = grid.N;
  s.L = grid.L;
  s.lambda = params.lambda;
  s.mu = params.mu;
  s.delta = delta;
  s.potential = std::move(potential);
  s.p = p;
  return s;
}

ScenarioInfo ScenarioInfo::with_pair(const AdmissiblePair& pair) const {
  ScenarioInfo s = *this;
  s.q = pair.q;
  s.r = pair.r;
  s.sigma = pair.sigma;
  return s;
}

EstimateRecord EstimateRecord::make(std::string name, ScenarioInfo info, double lhs, double rhs) {
  if (!(rhs > 0.0) || !std::isfinite(rhs))
    throw Error(ErrorKind::DegenerateInput, name + ": right-hand side data norm is zero");
  EstimateRecord r;
  r.name = std::move(name);
  r.info = std::move(info);
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = lhs / rhs;
  r.pass = std::isfinite(r.ratio);
  return r;
}

DataNorms DataNorms::of(const Field& f, const Field& g) {
  return {sobolev_norm(f, {0.5, true, 2.0}), sobolev_norm(g, {-0.5, true, 2.0})};
}

EstimateRecord strichartz_ratio(const SolutionTrace& trace, const AdmissiblePair& pair, const DataNorms& norms,
                                const ScenarioInfo& info) {
  const TimeGrid& time = trace.time;
  double lhs = 0.0;
  for (int k = 0; k <= time.M; ++k) {
    const Field& u = trace.u[static_cast<std::size_t>(k)];
    const double v = lebesgue_norm(pair.sigma == 0.0 ? u : fractional_multiplier(u, pair.sigma), pair.r);
    if (std::isinf(pair.q))
      lhs = std::max(lhs, v);
    else
      lhs += trapezoid(time, k) * std::pow(v, pair.q);
  }
  if (!std::isinf(pair.q)) lhs = std::pow(lhs, 1.0 / pair.q);
  return EstimateRecord::make("Str", info.with_pair(pair), lhs, norms.sum());
}

EstimateRecord weighted_l2_ratio(const SolutionTrace& trace, const Potential& V, const DataNorms& norms,
                                 const ScenarioInfo& info) {
  const double fp = require_fp(V);
  const double lhs = trace_weighted_norm(trace.u, V.magnitude(), trace.time);
  return EstimateRecord::make("wei", info, lhs, std::sqrt(fp) * norms.sum());
}

std::vector<EstimateRecord> free_weighted_ratios(const Field& f, const Field& g, const Potential& V,
                                                 const TimeGrid& time, const LameParams& params,
                                                 const ScenarioInfo& info) {
  const double root_fp = std::sqrt(require_fp(V));
  const RealField w = V.magnitude();
  const DataNorms norms = DataNorms::of(f, g);
  std::vector<EstimateRecord> out;

  auto norm_of = [&](auto&& sample) {
    double s = 0.0;
    for (int k = 0; k <= time.M; ++k) {
      const double v = weighted_l2(sample(time.time(k)), w);
      s += trapezoid(time, k) * v * v;
    }
    return std::sqrt(s);
  };

  if (norms.f_half > 0.0) {
    out.push_back(EstimateRecord::make(
        "weihomo", info, norm_of([&](double t) { return exp_propagator(f, t, params); }), root_fp * norms.f_half));
  }
  if (norms.g_neg_half > 0.0) {
    const Field gi = inv_symbol_sqrt_apply(g, params);
    out.push_back(EstimateRecord::make(
        "weihomo'", info, norm_of([&](double t) { return exp_propagator(gi, t, params); }), root_fp * norms.g_neg_half));
  }
  if (norms.f_half > 0.0) {
    out.push_back(EstimateRecord::make(
        "cosW", info, norm_of([&](double t) { return cosine_propagator(f, t, params); }), root_fp * norms.f_half));
  }
  if (norms.g_neg_half > 0.0) {
    out.push_back(EstimateRecord::make(
        "sinW", info, norm_of([&](double t) { return sine_propagator(g, t, params); }), root_fp * norms.g_neg_half));
  }
  return out;
}

LocalEnergyResult local_energy_from_density(const RealField& density, const BallSampling& sampling) {
  if (sampling.centers.empty() || sampling.radii.empty())
    throw Error(ErrorKind::InvalidParameter, "local energy needs a nonempty ball sampling");
  LocalEnergyResult res;
  const double cell = density.grid.cell_volume();
  for (double R : sampling.radii) {
    const RealField s = ball_sums(density, R);
    LocalEnergyRow row{R, sampling.centers.front(), -1.0};
    for (std::size_t c : sampling.centers) {
      const double v = std::max(0.0, s.values[c]) * cell / R;
      if (v > row.value) row = {R, c, v};
    }
    res.sup = std::max(res.sup, row.value);
    res.rows.push_back(row);
  }
  return res;
}

RealField local_energy_density(const SolutionTrace& trace) {
  const TimeGrid& time = trace.time;
  if (trace.dtu.size() != trace.u.size())
    throw Error(ErrorKind::ContractViolation, "local energy needs u_t samples in the trace");
  RealField density(trace.grid());
  for (int k = 0; k <= time.M; ++k) {
    const double tau = trapezoid(time, k);
    accumulate(density, bessel_multiplier(trace.u[static_cast<std::size_t>(k)], 0.5), tau);
    accumulate(density, bessel_multiplier(trace.dtu[static_cast<std::size_t>(k)], -0.5), tau);
  }
  return density;
}

LocalEnergyResult local_energy(const SolutionTrace& forward, const SolutionTrace& backward,
                               const BallSampling& sampling) {
  RealField density = local_energy_density(forward);
  const RealField back = local_energy_density(backward);
  for (std::size_t i = 0; i < density.values.size(); ++i) density.values[i] += back.values[i];
  return local_energy_from_density(density, sampling);
}

std::vector<EstimateRecord> local_smoothing_free(const Field& f, const Field& g, const BallSampling& sampling,
                                                 const TimeGrid& time, const LameParams& params,
                                                 const ScenarioInfo& info) {
  const DataNorms norms = DataNorms::of(f, g);
  std::vector<EstimateRecord> out;
  auto sup_for = [&](const Field& half) {
    RealField density(half.grid());
    for (int k = 0; k <= time.M; ++k) {
      const double tau = trapezoid(time, k);
      accumulate(density, exp_propagator(half, time.time(k), params), tau);
      accumulate(density, exp_propagator(half, -time.time(k), params), tau);
    }
    return local_energy_from_density(density, sampling).sup;
  };
  if (norms.f_half > 0.0)
    out.push_back(EstimateRecord::make("smoohom", info, sup_for(fractional_multiplier(f, 0.5)),
                                       norms.f_half * norms.f_half));
  if (norms.g_neg_half > 0.0)
    out.push_back(EstimateRecord::make("smoohom'", info,
                                       sup_for(fractional_multiplier(inv_symbol_sqrt_apply(g, params), 0.5)),
                                       norms.g_neg_half * norms.g_neg_half));
  return out;
}

std::vector<EstimateRecord> inhomogeneous_ratios(std::span<const Field> F, const Potential& V, const TimeGrid& time,
                                                 const LameParams& params, const BallSampling& sampling,
                                                 const ScenarioInfo& info) {
  const double fp = require_fp(V);
  const RealField w = V.magnitude();
  const double Fn = trace_weighted_norm(F, reciprocal(w), time);
  if (!(Fn > 0.0)) throw Error(ErrorKind::DegenerateInput, "inhomogeneous source is zero");
  const std::vector<Field> u = duhamel_all(F, time, params);

  std::vector<EstimateRecord> out;
  out.push_back(EstimateRecord::make("weiinho", info, trace_weighted_norm(u, w, time), fp * Fn));

  RealField density(w.grid);
  for (int k = 0; k <= time.M; ++k)
    accumulate(density, fractional_multiplier(u[static_cast<std::size_t>(k)], 0.5), trapezoid(time, k));
  out.push_back(EstimateRecord::make("smooinho", info, local_energy_from_density(density, sampling).sup, fp * Fn * Fn));
  return out;
}

Field dual_propagator_integral(std::span<const Field> F, const TimeGrid& time, const LameParams& params) {
  if (static_cast<int>(F.size()) != time.samples())
    throw Error(ErrorKind::ContractViolation, "one source sample per time step required");
  Field acc = Field::vector(F.front().grid(), Representation::Spectral);
  for (int k = 0; k <= time.M; ++k)
    acc += to_spectral(exp_propagator(F[static_cast<std::size_t>(k)], -time.time(k), params)) *
           cplx(trapezoid(time, k));
  return to_physical(std::move(acc));
}

EstimateRecord dual_propagator_ratio(std::span<const Field> F, const Potential& V, const TimeGrid& time,
                                     const LameParams& params, const ScenarioInfo& info) {
  const double fp = require_fp(V);
  const double Fn = trace_weighted_norm(F, reciprocal(V.magnitude()), time);
  if (!(Fn > 0.0)) throw Error(ErrorKind::DegenerateInput, "dual propagator source is zero");
  const double lhs = sobolev_norm(dual_propagator_integral(F, time, params), {-0.5, true, 2.0});
  return EstimateRecord::make("propa1adj", info, lhs, std::sqrt(fp) * Fn);
}

EstimateRecord sobolev_embedding_check(const Field& f, double q, int n, const ScenarioInfo& info) {
  if (n < 2 || std::abs(q - 2.0 * n / (n - 1.0)) > 1e-12)
    throw Error(ErrorKind::InvalidExponent, "the H^{1/2} embedding exponent is q = 2n/(n-1)");
  ScenarioInfo s = info;
  s.q = q;
  return EstimateRecord::make("sobolev", s, lebesgue_norm(f, q), sobolev_norm(f, {0.5, true, 2.0}));
}

}  // namespace lame
