#include "lame/app/suites.hpp"

#include <algorithm>
#include <cmath>

#include "lame/error.hpp"
#include "lame/kernels.hpp"
#include "lame/rng.hpp"
#include "lame/solver.hpp"
#include "lame/app/scenario.hpp"

namespace lame::app {

namespace {

EstimateRecord make_check(std::string name, const ScenarioInfo& info, double lhs, double rhs, double ceiling,
                          bool pass) {
  EstimateRecord r;
  r.name = std::move(name);
  r.info = info;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : kInf);
  r.ceiling = ceiling;
  r.pass = pass;
  return r;
}

double rel_l2(const Field& a, const Field& b) {
  const double nb = l2_norm(b);
  return nb > 0.0 ? l2_norm(a - b) / nb : l2_norm(a);
}

double rel_max(const Field& a, const Field& b, double scale) { return (a - b).max_abs() / scale; }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

ScenarioInfo base_info(const Grid& g, const RunConfig& cfg, double delta = 0.0, std::string potential = "none") {
  return ScenarioInfo::of(g, cfg.params(), delta, std::move(potential), kNaN);
}

Potential regularized_inverse_square(const RunConfig& cfg, const Grid& g, double epsilon) {
  return inverse_square_potential(g, epsilon, cfg.potential.amplitude);
}

Field scaled(Field f, double c) { return f *= cplx(c); }

RealField ones(const Grid& g) {
  RealField w(g);
  std::fill(w.values.begin(), w.values.end(), 1.0);
  return w;
}

double sphere_area(int n) { return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n); }

// Rows that take part in the scaling and refinement comparisons.
bool compared(const std::string& name) { return name != "rejected_pair" && name != "picard_iterations" && name != "fp_norm"; }

// The stride is given at the configured N; other resolutions keep the same
// physical centre spacing.
int center_stride(const RunConfig& cfg, int N) {
  return std::max(1, static_cast<int>(std::lround(static_cast<double>(cfg.estimates.stride) * N / cfg.N)));
}

}  // namespace

std::optional<Suite> parse_suite(const std::string& name) {
  if (name == "all") return Suite::All;
  if (name == "helmholtz") return Suite::Helmholtz;
  if (name == "propagators") return Suite::Propagators;
  if (name == "weights") return Suite::Weights;
  if (name == "solver") return Suite::Solver;
  if (name == "estimates") return Suite::Estimates;
  return std::nullopt;
}

const char* suite_name(Suite s) {
  switch (s) {
    case Suite::All: return "all";
    case Suite::Helmholtz: return "helmholtz";
    case Suite::Propagators: return "propagators";
    case Suite::Weights: return "weights";
    case Suite::Solver: return "solver";
    case Suite::Estimates: return "estimates";
  }
  return "?";
}

EstimateRecord check_at_most(std::string name, const ScenarioInfo& info, double measured, double tol) {
  return make_check(std::move(name), info, measured, 1.0, tol, std::isfinite(measured) && measured <= tol);
}

EstimateRecord check_above(std::string name, const ScenarioInfo& info, double measured, double floor) {
  // ratio = floor / measured must stay below 1.
  return make_check(std::move(name), info, floor, measured, 1.0, std::isfinite(measured) && measured > floor);
}

// ---------------------------------------------------------------- helmholtz

std::vector<EstimateRecord> helmholtz_suite(const RunConfig& cfg) {
  const Grid g = cfg.grid();
  const ScenarioInfo info = base_info(g, cfg);
  SplitMix64 rng(cfg.data.seed);
  const ScalarSymbol m = [](std::span<const double>, double r) -> cplx { return std::exp(-0.1 * r) * std::sqrt(1.0 + r); };

  double pyth = 0.0, dual = 0.0, comm = 0.0, counter = kInf;
  for (int i = 0; i < 100; ++i) {
    const Field f = random_smooth_field(g, rng);
    const HelmholtzPair hp = leray_project(f);
    const double nf = l2_norm(f), ns = l2_norm(hp.solenoidal), np = l2_norm(hp.potential);
    pyth = std::max(pyth, std::abs(nf * nf - ns * ns - np * np) / (nf * nf));
    const HelmholtzPair hv = helmholtz_via_poisson(f);
    dual = std::max(dual, std::max(l2_norm(hv.solenoidal - hp.solenoidal), l2_norm(hv.potential - hp.potential)) / nf);
    const CommutationReport rep = commutation_check(f, m);
    comm = std::max(comm, rep.scalar_commutator / rep.field_norm);
    counter = std::min(counter, rep.counterexample_commutator / rep.field_norm);
  }
  return {check_at_most("helmholtz.pythagoras", info, pyth, 1e-10),
          check_at_most("helmholtz.dual_route", info, dual, 1e-10),
          check_at_most("helmholtz.scalar_commutation", info, comm, 1e-10),
          check_above("helmholtz.counterexample", info, counter, 1e-3)};
}

// ---------------------------------------------------------------- propagators

std::vector<EstimateRecord> propagator_suite(const RunConfig& cfg) {
  const Grid g = cfg.grid();
  const LameParams p = cfg.params();
  const ScenarioInfo info = base_info(g, cfg);
  const int n = g.n;

  std::vector<Field> fields;
  SplitMix64 rng(cfg.data.seed + 1);
  for (int i = 0; i < 8; ++i) fields.push_back(random_smooth_field(g, rng));
  for (const char* fam : {"gaussian", "bump", "plane_wave"}) {
    InitialData d = make_data(g, {fam, cfg.data.seed, cfg.data.support_radius});
    fields.push_back(std::move(d.f));
    fields.push_back(std::move(d.g));
  }

  double routes = 0.0, square = 0.0, upper = 0.0, lower = 0.0;
  for (const Field& f : fields) {
    const Field a = apply_lame(f, p);
    routes = std::max(routes, rel_l2(apply_lame_decoupled(f, p), a));
    const Field s = symbol_sqrt_apply(f, p);
    square = std::max(square, rel_l2(symbol_sqrt_apply(s, p), a * cplx(-1.0)));
    const double h1 = sobolev_norm(f, {1.0, true, 2.0});
    const double ns = l2_norm(s);
    upper = std::max(upper, ns / (p.max_speed() * h1));
    lower = std::max(lower, p.min_speed() * h1 / ns);
  }

  std::vector<EstimateRecord> out;
  out.push_back(check_at_most("symbol.two_routes", info, routes, 1e-10));
  out.push_back(check_at_most("symbol.sqrt_squared", info, square, 1e-10));
  // Both sides of the sandwich as ratios that must not exceed 1 (roundoff slack 1e-12).
  out.push_back(check_at_most("symbol.sandwich_upper", info, upper, 1.0 + 1e-12));
  out.push_back(check_at_most("symbol.sandwich_lower", info, lower, 1.0 + 1e-12));

  // Plane waves: shear k = e1 + 2 e2 with a = 2 e1 - e2, pressure k = a = (1, ..., 1).
  std::vector<int> ks(static_cast<std::size_t>(n), 0), kp(static_cast<std::size_t>(n), 1);
  std::vector<double> as(static_cast<std::size_t>(n), 0.0), ap(static_cast<std::size_t>(n), 1.0);
  ks[0] = 1;
  ks[1] = 2;
  as[0] = 2.0;
  as[1] = -1.0;
  const double k0 = 2.0 * M_PI / g.L;
  const Field shear = plane_wave(g, ks, as), pressure = plane_wave(g, kp, ap);
  const double ws = p.shear_speed() * k0 * std::sqrt(5.0), wp = p.pressure_speed() * k0 * std::sqrt(double(n));
  double disp_s = 0.0, disp_p = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    disp_s = std::max({disp_s, rel_max(cosine_propagator(shear, t, p), shear * cplx(std::cos(ws * t)), shear.max_abs()),
                       rel_max(sine_propagator(shear, t, p), shear * cplx(std::sin(ws * t) / ws), shear.max_abs()),
                       rel_max(exp_propagator(shear, t, p), shear * std::polar(1.0, ws * t), shear.max_abs())});
    disp_p = std::max({disp_p,
                       rel_max(cosine_propagator(pressure, t, p), pressure * cplx(std::cos(wp * t)), pressure.max_abs()),
                       rel_max(sine_propagator(pressure, t, p), pressure * cplx(std::sin(wp * t) / wp), pressure.max_abs()),
                       rel_max(exp_propagator(pressure, t, p), pressure * std::polar(1.0, wp * t), pressure.max_abs())});
  }
  out.push_back(check_at_most("propagator.dispersion_shear", info, disp_s, 1e-10));
  out.push_back(check_at_most("propagator.dispersion_pressure", info, disp_p, 1e-10));

  const TimeGrid unit = TimeGrid::make(1.0, cfg.M);
  for (const char* fam : {"gaussian", "bump", "plane_wave"}) {
    const InitialData d = make_data(g, {fam, cfg.data.seed, cfg.data.support_radius});
    const SolutionTrace tr = free_solution(d.f, d.g, unit, p);
    const double e0 = elastic_energy(tr.u.front(), tr.dtu.front(), p);
    double drift = 0.0;
    for (std::size_t k = 1; k < tr.u.size(); ++k)
      drift = std::max(drift, std::abs(elastic_energy(tr.u[k], tr.dtu[k], p) / e0 - 1.0));
    ScenarioInfo fi = info;
    fi.family = fam;
    out.push_back(check_at_most("propagator.energy_drift", fi, drift, 1e-10));
  }

  double iso = 0.0, group = 0.0, cos_route = 0.0, sin_route = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Field& f = fields[i];
    const double nf = l2_norm(f);
    const Field e1 = exp_propagator(f, 0.4, p);
    iso = std::max(iso, std::abs(l2_norm(e1) - nf) / nf);
    group = std::max({group, rel_l2(exp_propagator(e1, 0.7, p), exp_propagator(f, 1.1, p)),
                      rel_l2(exp_propagator(e1, -0.4, p), f)});
    const HelmholtzPair hp = leray_project(f);
    for (double t : {0.3, 0.9}) {
      cos_route = std::max(cos_route, rel_l2(scalar_cosine(hp.solenoidal, t, p.shear_speed()) +
                                                 scalar_cosine(hp.potential, t, p.pressure_speed()),
                                             cosine_propagator(f, t, p)));
      sin_route = std::max(sin_route, rel_l2(scalar_sine(hp.solenoidal, t, p.shear_speed()) +
                                                 scalar_sine(hp.potential, t, p.pressure_speed()),
                                             sine_propagator(f, t, p)));
    }
  }
  out.push_back(check_at_most("propagator.isometry", info, iso, 1e-10));
  out.push_back(check_at_most("propagator.group_law", info, group, 1e-10));
  out.push_back(check_at_most("propagator.cosine_route", info, cos_route, 1e-10));
  out.push_back(check_at_most("propagator.sine_route", info, sin_route, 1e-10));
  return out;
}

// ---------------------------------------------------------------- weights

std::vector<EstimateRecord> weights_suite(const RunConfig& cfg) {
  const Grid g = cfg.grid();
  const ScenarioInfo info = base_info(g, cfg);
  const double p = cfg.estimates.p;
  const double dw = cfg.estimates.weight_exponent();
  std::vector<EstimateRecord> out;

  {
    SplitMix64 rng(cfg.data.seed + 2);
    const RealField one = ones(g);
    double riesz = 0.0, unweighted = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Field F = random_smooth_field(g, rng);
      riesz = std::max(riesz, rel_max(riesz_gradient(F), gradient(solve_poisson_div(F)), F.max_abs()));
      unweighted = std::max(unweighted, elliptic_regularity_ratio(F, one, 1));
    }
    out.push_back(check_at_most("elliptic.riesz_identity", info, riesz, 1e-10));
    out.push_back(check_at_most("elliptic.unweighted", info, unweighted, 1.0 + 1e-10));
  }

  for (int Nw : {cfg.N / 2, cfg.N}) {
    const Grid gw = cfg.grid_at(Nw);
    Potential V = regularized_inverse_square(cfg, gw, cfg.epsilon());
    const BallSampling sampling = BallSampling::dyadic(gw, center_stride(cfg, Nw), cfg.estimates.radii);
    V.set_fp_norm(p, fefferman_phong_norm(V, p, sampling));
    const RealField W = build_weight(V, dw, sampling.radii);
    SplitMix64 rng(cfg.data.seed + 3);
    double plus = 0.0, minus = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Field F = random_smooth_field(gw, rng);
      plus = std::max(plus, elliptic_regularity_ratio(F, W, 1));
      minus = std::max(minus, elliptic_regularity_ratio(F, W, -1));
    }
    ScenarioInfo wi = base_info(gw, cfg, 0.0, V.label());
    wi.p = p;
    out.push_back(check_at_most("elliptic.weighted_W", wi, plus, 10.0));
    out.push_back(check_at_most("elliptic.weighted_W^-1", wi, minus, 10.0));
  }

  // Closed-form radial integral for amplitude-1 (|y|^2 + eps^2)^{-1} I_n as eps -> 0.
  const double p_oracle = 1.25;
  if (p_oracle < 0.5 * g.n) {
    const Potential V = inverse_square_potential(g, g.h(), 1.0);
    const BallSampling sampling = BallSampling::dyadic(g, cfg.estimates.stride);
    const double est = fefferman_phong_norm(V, p_oracle, sampling);
    const double oracle =
        std::sqrt(double(g.n)) * std::pow(sphere_area(g.n) / (g.n - 2.0 * p_oracle), 1.0 / p_oracle);
    ScenarioInfo oi = base_info(g, cfg, 0.0, V.label());
    oi.p = p_oracle;
    out.push_back(make_check("fp.estimator", oi, est, oracle, kInf, std::isfinite(est)));
    out.push_back(make_check("fp.oracle_deviation", oi, std::abs(est - oracle), oracle, 0.1,
                             std::abs(est - oracle) <= 0.1 * oracle));
    const auto profile = fefferman_phong_profile(V.magnitude(), p_oracle, g.origin(), sampling.radii);
    const double lo = *std::min_element(profile.begin(), profile.end());
    const double hi = *std::max_element(profile.begin(), profile.end());
    out.push_back(make_check("fp.radius_spread", oi, hi - lo, lo, 0.15, hi - lo <= 0.15 * lo));
  }

  {
    const BallSampling sampling = BallSampling::dyadic(g, std::max(cfg.estimates.stride, 8), cfg.estimates.radii);
    double a1_lo = kInf, a1_hi = 0.0, excess = 0.0;
    for (double mult : {1.0, 2.0, 4.0}) {
      Potential V = regularized_inverse_square(cfg, g, mult * g.h());
      V.set_fp_norm(p, fefferman_phong_norm(V, p, sampling));
      const RealField W = build_weight(V, dw, sampling.radii);
      const RealField mag = V.magnitude();
      double worst = 0.0;
      for (std::size_t i = 0; i < mag.values.size(); ++i) worst = std::max(worst, mag.values[i] - W.values[i]);
      excess = std::max(excess, worst / mag.max());
      const double a1 = a1_constant(W, sampling);
      a1_lo = std::min(a1_lo, a1);
      a1_hi = std::max(a1_hi, a1);
    }
    out.push_back(make_check("weights.a1_epsilon_spread", info, a1_hi, a1_lo, 4.0, a1_hi <= 4.0 * a1_lo));
    out.push_back(check_at_most("weights.dominates_potential", info, excess, 0.0));
  }
  return out;
}

// ---------------------------------------------------------------- solver

std::vector<EstimateRecord> solver_suite(const RunConfig& cfg) {
  const Grid g = cfg.grid();
  const LameParams p = cfg.params();
  const TimeGrid time = cfg.time();
  const InitialData d = make_data(g, cfg.data);
  const Potential V = regularized_inverse_square(cfg, g, cfg.epsilon());
  const RealField w = V.magnitude();
  std::vector<EstimateRecord> out;

  PicardConfig pc;
  pc.tol = cfg.tol;
  pc.max_iter = cfg.max_iter;
  pc.compute_dtu = false;

  {
    const PicardResult r0 = picard_solve(d.f, d.g, V, pc, time, p);
    const SolutionTrace free = free_solution(d.f, d.g, time, p);
    double diff = 0.0;
    for (std::size_t k = 0; k < free.u.size(); ++k) diff = std::max(diff, rel_l2(r0.trace.u[k], free.u[k]));
    const ScenarioInfo info = base_info(g, cfg, 0.0, V.label());
    out.push_back(check_at_most("picard.free_iterations", info, r0.report.iterations, 1.0));
    out.push_back(check_at_most("picard.free_match", info, diff, 1e-14));
  }

  std::vector<double> corrections;
  const std::vector<double> deltas{0.02, 0.05};
  for (double delta : deltas) {
    pc.delta = delta;
    pc.initial = InitialIterate::Free;
    const PicardResult r = picard_solve(d.f, d.g, V, pc, time, p);
    const PicardReport& rep = r.report;
    const ScenarioInfo info = base_info(g, cfg, delta, V.label());
    out.push_back(make_check("picard.iterations", info, rep.iterations, 1.0, kInf, rep.converged));

    // Geometric phase: ratios whose differences sit well above the stopping level.
    const double floor = 100.0 * pc.tol * rep.norms.back();
    double rmax = 0.0, rlo = kInf, rhi = 0.0;
    for (std::size_t m = 0; m < rep.ratios.size(); ++m) {
      rmax = std::max(rmax, rep.ratios[m]);
      if (rep.differences[m + 1] > floor) {
        rlo = std::min(rlo, rep.ratios[m]);
        rhi = std::max(rhi, rep.ratios[m]);
      }
    }
    out.push_back(make_check("picard.max_ratio", info, rmax, 1.0, 1.0, rmax < 1.0));
    if (rhi > 0.0) out.push_back(make_check("picard.ratio_spread", info, rhi, rlo, 1.5, rhi <= 1.5 * rlo));

    const FixedPointResidual fpr = fixed_point_residual(r.trace, d.f, d.g, V, delta, p);
    out.push_back(make_check("picard.certificate", info, fpr.difference, pc.tol * fpr.norm, 2.0,
                             fpr.difference <= 2.0 * pc.tol * fpr.norm));
    corrections.push_back(rep.first_correction / std::abs(delta));

    if (delta == deltas.back()) {
      PicardConfig zc = pc;
      zc.initial = InitialIterate::Zero;
      const PicardResult z = picard_solve(d.f, d.g, V, zc, time, p);
      std::vector<Field> diff;
      diff.reserve(z.trace.u.size());
      for (std::size_t k = 0; k < z.trace.u.size(); ++k) diff.push_back(z.trace.u[k] - r.trace.u[k]);
      const double gap = trace_weighted_norm(diff, w, time);
      const double norm = trace_weighted_norm(r.trace.u, w, time);
      out.push_back(make_check("picard.uniqueness", info, gap, pc.tol * norm, 5.0, gap <= 5.0 * pc.tol * norm));
    }
  }
  {
    const ScenarioInfo info = base_info(g, cfg, deltas.back(), V.label());
    const double dev = std::abs(corrections[1] / corrections[0] - 1.0);
    out.push_back(check_at_most("picard.first_correction_linearity", info, dev, 0.01));
  }

  // Order in M on a small grid: PDE residual of free plane-wave data and the
  // Duhamel integral of a time-constant shear mode against its closed form.
  const Grid gs = Grid::make(g.n, 16, g.L);
  const InitialData pw = make_data(gs, {"plane_wave", cfg.data.seed, cfg.data.support_radius});
  std::vector<int> k1(static_cast<std::size_t>(g.n), 0);
  std::vector<double> a2(static_cast<std::size_t>(g.n), 0.0);
  k1[0] = 1;
  a2[1] = 1.0;
  const Field a = plane_wave(gs, k1, a2);
  const double omega = p.shear_speed() * 2.0 * M_PI / g.L;
  std::vector<double> Ms, res, errs;
  for (int M : {64, 128, 256}) {
    const TimeGrid tm = TimeGrid::make(1.0, M);
    res.push_back(pde_residual(free_solution(pw.f, pw.g, tm, p), nullptr, 0.0, p));
    const std::vector<Field> F(static_cast<std::size_t>(tm.samples()), a);
    const auto u = duhamel_all(F, tm, p);
    double err = 0.0;
    for (int k = 0; k <= M; ++k) {
      const double exact = (1.0 - std::cos(omega * tm.time(k))) / (omega * omega);
      err = std::max(err, (u[static_cast<std::size_t>(k)] - a * cplx(exact)).max_abs());
    }
    errs.push_back(err);
    Ms.push_back(M);
  }
  const ScenarioInfo si = base_info(gs, cfg);
  const double o1 = -loglog_slope(Ms, res), o2 = -loglog_slope(Ms, errs);
  out.push_back(make_check("order.pde_residual", si, std::abs(o1 - 2.0), 1.0, 0.2, std::abs(o1 - 2.0) <= 0.2));
  out.push_back(make_check("order.duhamel", si, std::abs(o2 - 2.0), 1.0, 0.2, std::abs(o2 - 2.0) <= 0.2));
  return out;
}

// ---------------------------------------------------------------- estimates

std::vector<EstimateRecord> estimate_records(const RunConfig& cfg, int N, double data_scale) {
  cfg.validate_window();
  const Grid g = cfg.grid_at(N);
  const LameParams params = cfg.params();
  const TimeGrid time = cfg.time();
  const EstimateSpec& es = cfg.estimates;
  const BallSampling sampling = BallSampling::dyadic(g, center_stride(cfg, N), es.radii);

  Potential V = make_potential(cfg, g);
  const double fp = fefferman_phong_norm(V, es.p, sampling);
  V.set_fp_norm(es.p, fp);
  ScenarioInfo base = ScenarioInfo::of(g, params, 0.0, V.label(), es.p);

  std::vector<EstimateRecord> out;
  std::vector<AdmissiblePair> pairs;
  for (const auto& [q, r] : es.pairs) {
    try {
      pairs.push_back(AdmissiblePair::make(q, r, g.n));
    } catch (const Error&) {
      ScenarioInfo ri = base;
      ri.q = q;
      ri.r = r;
      out.push_back(make_check("rejected_pair", ri, kNaN, kNaN, kNaN, true));
    }
  }
  out.push_back(make_check("fp_norm", base, fp, 1.0, kInf, std::isfinite(fp)));

  auto finish = [&](EstimateRecord r) {
    if (es.ceiling) {
      r.ceiling = *es.ceiling;
      r.pass = r.pass && r.ratio <= *es.ceiling;
    }
    out.push_back(std::move(r));
  };

  PicardConfig pc;
  pc.tol = cfg.tol;
  pc.max_iter = cfg.max_iter;

  for (const std::string& family : es.families) {
    InitialData data = make_data(g, {family, cfg.data.seed, cfg.data.support_radius});
    const Field f = scaled(std::move(data.f), data_scale), gv = scaled(std::move(data.g), data_scale);
    const Field minus_g = scaled(gv, -1.0);
    const DataNorms norms = DataNorms::of(f, gv);

    for (double delta : es.deltas) {
      ScenarioInfo info = base;
      info.delta = delta;
      info.family = family;

      auto solve = [&](const Field& g0, int* iterations) {
        if (delta == 0.0) return free_solution(f, g0, time, params);
        pc.delta = delta;
        PicardResult r = picard_solve(f, g0, V, pc, time, params);
        if (iterations) *iterations = r.report.iterations;
        return std::move(r.trace);
      };

      int iterations = 0;
      SolutionTrace fwd = solve(gv, &iterations);
      if (delta != 0.0) out.push_back(make_check("picard_iterations", info, iterations, 1.0, kInf, true));
      for (const auto& pair : pairs) finish(strichartz_ratio(fwd, pair, norms, info));
      finish(weighted_l2_ratio(fwd, V, norms, info));

      RealField density = local_energy_density(fwd);
      fwd.dtu.clear();
      fwd.dtu.shrink_to_fit();
      {
        const SolutionTrace bwd = solve(minus_g, nullptr);
        const RealField back = local_energy_density(bwd);
        for (std::size_t i = 0; i < density.values.size(); ++i) density.values[i] += back.values[i];
      }
      finish(EstimateRecord::make("smoo", info, local_energy_from_density(density, sampling).sup, norms.sum_sq()));

      std::vector<Field> F;
      F.reserve(fwd.u.size());
      for (const Field& u : fwd.u) F.push_back(remove_mean(V.apply(u)));
      fwd.u.clear();
      fwd.u.shrink_to_fit();
      for (auto& r : inhomogeneous_ratios(F, V, time, params, sampling, info)) finish(std::move(r));
      finish(dual_propagator_ratio(F, V, time, params, info));
      F.clear();

      if (delta == 0.0) {
        for (auto& r : free_weighted_ratios(f, gv, V, time, params, info)) finish(std::move(r));
        for (auto& r : local_smoothing_free(f, gv, sampling, time, params, info)) finish(std::move(r));
        finish(sobolev_embedding_check(f, 2.0 * g.n / (g.n - 1.0), g.n, info));
      }
    }
  }
  return out;
}

std::vector<EstimateRecord> estimates_suite(const RunConfig& cfg) {
  if (cfg.estimates.pairs.empty()) throw Error(ErrorKind::InvalidConfig, "estimates.pairs is empty: nothing to verify");
  std::vector<EstimateRecord> out = estimate_records(cfg, cfg.N);
  const std::vector<EstimateRecord> coarse = estimate_records(cfg, cfg.N / 2);
  const std::vector<EstimateRecord> tripled = estimate_records(cfg, cfg.N / 2, 3.0);
  const std::size_t count = out.size();

  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const EstimateRecord& c = coarse[i];
    if (!compared(c.name)) continue;
    const double dev = std::abs(tripled[i].ratio / c.ratio - 1.0);
    EstimateRecord row = check_at_most("scale." + c.name, c.info, dev, 1e-10);
    out.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < count; ++i) {
    const EstimateRecord& m = out[i];
    if (!compared(m.name)) continue;
    const double tol = m.name == "sobolev" ? 0.15 : cfg.estimates.refinement_tolerance;
    const double dev = std::abs(m.ratio - coarse[i].ratio);
    out.push_back(make_check("refine." + m.name, m.info, dev, std::abs(m.ratio), tol, dev <= tol * std::abs(m.ratio)));
  }
  ScenarioInfo ei = ScenarioInfo::of(cfg.grid(), cfg.params(), 0.0, "none", kNaN);
  ei.q = 2.0;
  ei.r = kInf;
  const bool rejected = !admissible(2.0, kInf, cfg.n).has_value();
  out.push_back(make_check("admissibility.endpoint", ei, rejected ? 0.0 : 1.0, 1.0, 0.0, rejected));
  return out;
}

std::vector<EstimateRecord> run_suite(Suite suite, const RunConfig& cfg) {
  std::vector<EstimateRecord> out;
  auto add = [&](std::vector<EstimateRecord> rows) {
    for (auto& r : rows) out.push_back(std::move(r));
  };
  if (suite == Suite::All || suite == Suite::Helmholtz) add(helmholtz_suite(cfg));
  if (suite == Suite::All || suite == Suite::Propagators) add(propagator_suite(cfg));
  if (suite == Suite::All || suite == Suite::Weights) add(weights_suite(cfg));
  if (suite == Suite::All || suite == Suite::Solver) add(solver_suite(cfg));
  if (suite == Suite::All || suite == Suite::Estimates) add(estimates_suite(cfg));
  return out;
}

}  // namespace lame::app
