#include "lame/solver.hpp"

#include <cmath>
#include <fstream>

#include "lame/error.hpp"
#include "lame/field_io.hpp"
#include "lame/kernels.hpp"
#include "lame/log.hpp"

namespace lame {

namespace {

void require_vector(const Field& f, const char* what) {
  if (!f.is_vector()) throw Error(ErrorKind::ContractViolation, std::string(what) + " must be a vector field");
}

bool has_mean(const Field& f) {
  const double scale = std::max(1.0, f.max_abs());
  for (cplx m : component_means(f))
    if (std::abs(m) > 1e-14 * scale) return true;
  return false;
}

Field project_mean(const Field& f, const char* what) {
  if (has_mean(f)) warn(std::string(what) + " has a nonzero mean; projecting it out");
  return remove_mean(f);
}

/// Free evolution of one sample, spectral in and out.
void free_sample(const Field& fs, const Field& gs, double t, const LameParams& params, Field* u, Field* dtu) {
  const Grid& g = fs.grid();
  const auto& tab = spectral_tables(g);
  const int n = g.n;
  const double cs = params.shear_speed();
  const double cp = params.pressure_speed();
  kernels::parallel_for(g.size(), [&](std::size_t flat) {
    const double xi2 = tab.xi2[flat];
    if (xi2 == 0.0) {
      for (int d = 0; d < n; ++d) {
        if (u) u->at(d, flat) = fs.at(d, flat);
        if (dtu) dtu->at(d, flat) = gs.at(d, flat);
      }
      return;
    }
    cplx df{}, dg{};
    for (int d = 0; d < n; ++d) {
      df += tab.component(d, flat) * fs.at(d, flat);
      dg += tab.component(d, flat) * gs.at(d, flat);
    }
    df /= xi2;
    dg /= xi2;
    const double rho = tab.abs_xi[flat];
    const double ws = cs * rho, wp = cp * rho;
    const double cS = std::cos(ws * t), sS = std::sin(ws * t);
    const double cP = std::cos(wp * t), sP = std::sin(wp * t);
    for (int d = 0; d < n; ++d) {
      const double xd = tab.component(d, flat);
      const cplx fp = xd * df, gp = xd * dg;
      const cplx fsol = fs.at(d, flat) - fp, gsol = gs.at(d, flat) - gp;
      if (u) u->at(d, flat) = cS * fsol + (sS / ws) * gsol + cP * fp + (sP / wp) * gp;
      if (dtu) dtu->at(d, flat) = -ws * sS * fsol + cS * gsol - wp * sP * fp + cP * gp;
    }
  });
}

double trapezoid_weight(const TimeGrid& time, int k) {
  return (k == 0 || k == time.M) ? 0.5 * time.dt() : time.dt();
}

/// Weight used when a sample enters the running sums: the left endpoint gets
/// half a step, every later sample a full step (the right endpoint of each
/// partial integral is corrected separately where it matters).
double running_weight(const TimeGrid& time, int k) { return k == 0 ? 0.5 * time.dt() : time.dt(); }

double weighted_sq(const Field& a, const Field* b, const RealField& w) {
  const Grid& g = a.grid();
  const int n = a.components();
  const double s = kernels::parallel_sum(g.size(), [&](std::size_t flat) {
    double acc = 0.0;
    for (int d = 0; d < n; ++d) acc += std::norm(b ? a.at(d, flat) - b->at(d, flat) : a.at(d, flat));
    return w.values[flat] * acc;
  });
  return s * g.cell_volume();
}

Field source_of(const Potential& V, double delta, const Field& u_physical) {
  Field s = V.apply(u_physical);
  s *= cplx(-delta);
  return to_spectral(std::move(s));
}

TraceMetadata metadata_for(const Field& f, const Field& g, const LameParams& params) {
  TraceMetadata m;
  m.params = params;
  m.f_norm = sobolev_norm(f, {0.5, true, 2.0});
  m.g_norm = sobolev_norm(g, {-0.5, true, 2.0});
  return m;
}

}  // namespace

void PicardConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "Picard tolerance must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidParameter, "Picard max_iter must be >= 1");
  if (!std::isfinite(delta)) throw Error(ErrorKind::InvalidParameter, "coupling delta must be finite");
}

// ---------------------------------------------------------------- accumulator

DuhamelAccumulator::DuhamelAccumulator(const Grid& grid, const LameParams& params)
    : grid_(grid), params_(params) {
  reset();
}

void DuhamelAccumulator::reset() {
  const std::size_t len = grid_.size() * static_cast<std::size_t>(grid_.n);
  cs_.assign(len, cplx{});
  ss_.assign(len, cplx{});
  cp_.assign(len, cplx{});
  sp_.assign(len, cplx{});
}

void DuhamelAccumulator::add(const Field& src, double s, double tau) {
  if (src.representation() != Representation::Spectral || !(src.grid() == grid_) || !src.is_vector())
    throw Error(ErrorKind::ContractViolation, "Duhamel source must be a spectral vector field on the trace grid");
  const auto& tab = spectral_tables(grid_);
  const int n = grid_.n;
  const std::size_t size = grid_.size();
  const double cs = params_.shear_speed(), cp = params_.pressure_speed();
  kernels::parallel_for(size, [&](std::size_t flat) {
    const double xi2 = tab.xi2[flat];
    if (xi2 == 0.0) {
      for (int d = 0; d < n; ++d) {
        const std::size_t i = static_cast<std::size_t>(d) * size + flat;
        cs_[i] += tau * src.at(d, flat);
        ss_[i] += tau * s * src.at(d, flat);
      }
      return;
    }
    cplx dot{};
    for (int d = 0; d < n; ++d) dot += tab.component(d, flat) * src.at(d, flat);
    dot /= xi2;
    const double rho = tab.abs_xi[flat];
    const double aS = tau * std::cos(cs * rho * s), bS = tau * std::sin(cs * rho * s);
    const double aP = tau * std::cos(cp * rho * s), bP = tau * std::sin(cp * rho * s);
    for (int d = 0; d < n; ++d) {
      const std::size_t i = static_cast<std::size_t>(d) * size + flat;
      const cplx p = tab.component(d, flat) * dot;
      const cplx sol = src.at(d, flat) - p;
      cs_[i] += aS * sol;
      ss_[i] += bS * sol;
      cp_[i] += aP * p;
      sp_[i] += bP * p;
    }
  });
}

Field DuhamelAccumulator::value(double t) const {
  const auto& tab = spectral_tables(grid_);
  const int n = grid_.n;
  const std::size_t size = grid_.size();
  const double cs = params_.shear_speed(), cp = params_.pressure_speed();
  Field out = Field::vector(grid_, Representation::Spectral);
  kernels::parallel_for(size, [&](std::size_t flat) {
    const double rho = tab.abs_xi[flat];
    if (rho == 0.0) {
      for (int d = 0; d < n; ++d) {
        const std::size_t i = static_cast<std::size_t>(d) * size + flat;
        out.at(d, flat) = t * cs_[i] - ss_[i];
      }
      return;
    }
    const double ws = cs * rho, wp = cp * rho;
    const double sS = std::sin(ws * t) / ws, cS = std::cos(ws * t) / ws;
    const double sP = std::sin(wp * t) / wp, cP = std::cos(wp * t) / wp;
    for (int d = 0; d < n; ++d) {
      const std::size_t i = static_cast<std::size_t>(d) * size + flat;
      out.at(d, flat) = sS * cs_[i] - cS * ss_[i] + sP * cp_[i] - cP * sp_[i];
    }
  });
  return out;
}

Field DuhamelAccumulator::derivative(double t) const {
  const auto& tab = spectral_tables(grid_);
  const int n = grid_.n;
  const std::size_t size = grid_.size();
  const double cs = params_.shear_speed(), cp = params_.pressure_speed();
  Field out = Field::vector(grid_, Representation::Spectral);
  kernels::parallel_for(size, [&](std::size_t flat) {
    const double rho = tab.abs_xi[flat];
    if (rho == 0.0) {
      for (int d = 0; d < n; ++d) out.at(d, flat) = cs_[static_cast<std::size_t>(d) * size + flat];
      return;
    }
    const double cS = std::cos(cs * rho * t), sS = std::sin(cs * rho * t);
    const double cP = std::cos(cp * rho * t), sP = std::sin(cp * rho * t);
    for (int d = 0; d < n; ++d) {
      const std::size_t i = static_cast<std::size_t>(d) * size + flat;
      out.at(d, flat) = cS * cs_[i] + sS * ss_[i] + cP * cp_[i] + sP * sp_[i];
    }
  });
  return out;
}

// ---------------------------------------------------------------- free / Duhamel

SolutionTrace free_solution(const Field& f, const Field& g, const TimeGrid& time, const LameParams& params) {
  require_vector(f, "f");
  require_vector(g, "g");
  if (!(f.grid() == g.grid())) throw Error(ErrorKind::ContractViolation, "f and g live on different grids");
  const Field fs = to_spectral(f);
  const Field gs = to_spectral(project_mean(g, "g"));
  SolutionTrace tr{time, {}, {}, metadata_for(f, g, params)};
  tr.u.reserve(static_cast<std::size_t>(time.samples()));
  tr.dtu.reserve(static_cast<std::size_t>(time.samples()));
  for (int k = 0; k <= time.M; ++k) {
    Field u = Field::vector(f.grid(), Representation::Spectral);
    Field v = Field::vector(f.grid(), Representation::Spectral);
    free_sample(fs, gs, time.time(k), params, &u, &v);
    tr.u.push_back(to_physical(std::move(u)));
    tr.dtu.push_back(to_physical(std::move(v)));
  }
  return tr;
}

std::vector<Field> duhamel_all(std::span<const Field> F, const TimeGrid& time, const LameParams& params) {
  if (static_cast<int>(F.size()) != time.samples())
    throw Error(ErrorKind::ContractViolation, "Duhamel needs one source sample per time step");
  require_vector(F.front(), "F");
  bool warned = false;
  DuhamelAccumulator acc(F.front().grid(), params);
  std::vector<Field> out;
  out.reserve(F.size());
  for (int k = 0; k <= time.M; ++k) {
    out.push_back(to_physical(acc.value(time.time(k))));
    const Field& src = F[static_cast<std::size_t>(k)];
    if (!warned && has_mean(src)) {
      warn("Duhamel source has a nonzero mean; projecting it out");
      warned = true;
    }
    acc.add(to_spectral(remove_mean(src)), time.time(k), running_weight(time, k));
  }
  return out;
}

Field duhamel(std::span<const Field> F, const TimeGrid& time, const LameParams& params, int t_index) {
  if (t_index < 0 || t_index > time.M) throw Error(ErrorKind::ContractViolation, "t_index out of range");
  if (static_cast<int>(F.size()) != time.samples())
    throw Error(ErrorKind::ContractViolation, "Duhamel needs one source sample per time step");
  require_vector(F.front(), "F");
  DuhamelAccumulator acc(F.front().grid(), params);
  for (int k = 0; k < t_index; ++k)
    acc.add(to_spectral(remove_mean(F[static_cast<std::size_t>(k)])), time.time(k), running_weight(time, k));
  return to_physical(acc.value(time.time(t_index)));
}

double trace_weighted_norm(std::span<const Field> samples, const RealField& w, const TimeGrid& time) {
  if (static_cast<int>(samples.size()) != time.samples())
    throw Error(ErrorKind::ContractViolation, "trace length does not match the time grid");
  double s = 0.0;
  for (int k = 0; k <= time.M; ++k) {
    const Field p = to_physical(samples[static_cast<std::size_t>(k)]);
    s += trapezoid_weight(time, k) * weighted_sq(p, nullptr, w);
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------- Picard

PicardResult picard_solve(const Field& f, const Field& g, const Potential& V, const PicardConfig& config,
                          const TimeGrid& time, const LameParams& params) {
  config.validate();
  require_vector(f, "f");
  require_vector(g, "g");
  if (!(f.grid() == V.grid())) throw Error(ErrorKind::ContractViolation, "data and potential live on different grids");

  const Grid& grid = f.grid();
  const Field fs = to_spectral(f);
  const Field gs = to_spectral(project_mean(g, "g"));
  const RealField w = V.magnitude();
  const int M = time.M;

  PicardResult res;
  SolutionTrace& tr = res.trace;
  tr.time = time;
  tr.meta = metadata_for(f, g, params);
  tr.meta.potential = V.label();
  tr.meta.delta = config.delta;

  auto free_u = [&](int k) {
    Field u = Field::vector(grid, Representation::Spectral);
    free_sample(fs, gs, time.time(k), params, &u, nullptr);
    return u;
  };

  tr.u.reserve(static_cast<std::size_t>(time.samples()));
  for (int k = 0; k <= M; ++k)
    tr.u.push_back(config.initial == InitialIterate::Free ? to_physical(free_u(k)) : Field::vector(grid));

  DuhamelAccumulator acc(grid, params);
  PicardReport& rep = res.report;
  int rising = 0;
  for (int m = 0; m < config.max_iter; ++m) {
    acc.reset();
    double diff2 = 0.0, norm2 = 0.0;
    for (int k = 0; k <= M; ++k) {
      Field next = free_u(k);
      if (config.delta != 0.0) next += acc.value(time.time(k));
      next = to_physical(std::move(next));
      Field& old = tr.u[static_cast<std::size_t>(k)];
      if (config.delta != 0.0) acc.add(source_of(V, config.delta, old), time.time(k), running_weight(time, k));
      const double tau = trapezoid_weight(time, k);
      diff2 += tau * weighted_sq(next, &old, w);
      norm2 += tau * weighted_sq(old, nullptr, w);
      old = std::move(next);
    }
    const double diff = std::sqrt(diff2), norm = std::sqrt(norm2);
    rep.iterations = m + 1;
    rep.differences.push_back(diff);
    rep.norms.push_back(norm);
    if (m == 0) rep.first_correction = diff;
    if (m > 0) {
      const double prev = rep.differences[static_cast<std::size_t>(m - 1)];
      const double ratio = prev > 0.0 ? diff / prev : 0.0;
      rep.ratios.push_back(ratio);
      rep.contraction_ratio = ratio;
      rising = ratio >= 1.0 ? rising + 1 : 0;
    }
    if (diff <= config.tol * norm) {
      rep.converged = true;
      break;
    }
    if (rising >= 3) {
      throw Error(ErrorKind::NoContraction,
                  "Picard iteration is not contracting (ratio " + std::to_string(rep.contraction_ratio) +
                      " >= 1 for 3 consecutive iterations); |delta| is too large",
                  rep.contraction_ratio);
    }
  }
  if (!rep.converged)
    throw Error(ErrorKind::NonConvergence,
                "Picard iteration did not converge within max_iter (last ratio " +
                    std::to_string(rep.contraction_ratio) + ")",
                rep.contraction_ratio);

  if (config.compute_dtu) tr.dtu = time_derivative_trace(f, g, &V, config.delta, tr, params);
  return res;
}

std::vector<Field> time_derivative_trace(const Field& f, const Field& g, const Potential* V, double delta,
                                         const SolutionTrace& trace, const LameParams& params) {
  const TimeGrid& time = trace.time;
  const Grid& grid = f.grid();
  const Field fs = to_spectral(f);
  const Field gs = to_spectral(project_mean(g, "g"));
  const bool coupled = V != nullptr && delta != 0.0;
  DuhamelAccumulator acc(grid, params);
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(time.samples()));
  for (int k = 0; k <= time.M; ++k) {
    Field v = Field::vector(grid, Representation::Spectral);
    free_sample(fs, gs, time.time(k), params, nullptr, &v);
    if (coupled) {
      const Field src = source_of(*V, delta, trace.u[static_cast<std::size_t>(k)]);
      v += acc.derivative(time.time(k));
      // Right endpoint of [0, t_k]: cos(0) = 1 on both branches.
      if (k > 0) v += src * cplx(0.5 * time.dt());
      acc.add(src, time.time(k), running_weight(time, k));
    }
    out.push_back(to_physical(std::move(v)));
  }
  return out;
}

FixedPointResidual fixed_point_residual(const SolutionTrace& trace, const Field& f, const Field& g, const Potential& V,
                                        double delta, const LameParams& params) {
  const TimeGrid& time = trace.time;
  const Grid& grid = f.grid();
  const Field fs = to_spectral(f);
  const Field gs = to_spectral(project_mean(g, "g"));
  const RealField w = V.magnitude();
  DuhamelAccumulator acc(grid, params);
  double diff2 = 0.0, norm2 = 0.0;
  for (int k = 0; k <= time.M; ++k) {
    Field au = Field::vector(grid, Representation::Spectral);
    free_sample(fs, gs, time.time(k), params, &au, nullptr);
    const Field& u = trace.u[static_cast<std::size_t>(k)];
    if (delta != 0.0) {
      au += acc.value(time.time(k));
      acc.add(source_of(V, delta, u), time.time(k), running_weight(time, k));
    }
    au = to_physical(std::move(au));
    const double tau = trapezoid_weight(time, k);
    diff2 += tau * weighted_sq(au, &u, w);
    norm2 += tau * weighted_sq(u, nullptr, w);
  }
  return {std::sqrt(diff2), std::sqrt(norm2)};
}

double pde_residual(const SolutionTrace& trace, const Potential* V, double delta, const LameParams& params) {
  const TimeGrid& time = trace.time;
  if (time.M < 2) throw Error(ErrorKind::InvalidParameter, "pde_residual needs M >= 2");
  const double inv_dt2 = 1.0 / (time.dt() * time.dt());
  double worst = 0.0;
  for (int k = 1; k < time.M; ++k) {
    const Field& u = trace.u[static_cast<std::size_t>(k)];
    const double un = l2_norm(u);
    if (un == 0.0) continue;
    Field r = (trace.u[static_cast<std::size_t>(k + 1)] - u * cplx(2.0) + trace.u[static_cast<std::size_t>(k - 1)]) *
              cplx(inv_dt2);
    r -= to_physical(apply_lame(u, params));
    if (V != nullptr && delta != 0.0) r += V->apply(u) * cplx(delta);
    worst = std::max(worst, l2_norm(r) / un);
  }
  return worst;
}

double elastic_energy(const Field& u, const Field& dtu, const LameParams& params) {
  require_vector(u, "u");
  require_vector(dtu, "dtu");
  const Grid& g = u.grid();
  const auto& tab = spectral_tables(g);
  const int n = g.n;
  const Field us = to_spectral(u);
  const double grad = kernels::parallel_sum(g.size(), [&](std::size_t flat) {
    const double xi2 = tab.xi2[flat];
    if (xi2 == 0.0) return 0.0;
    cplx dot{};
    for (int d = 0; d < n; ++d) dot += tab.component(d, flat) * us.at(d, flat);
    const double p2 = std::norm(dot) / xi2;  // |P u|^2
    double all = 0.0;
    for (int d = 0; d < n; ++d) all += std::norm(us.at(d, flat));
    return xi2 * (params.mu * (all - p2) + (params.lambda + 2.0 * params.mu) * p2);
  });
  const double kinetic = l2_norm(dtu);
  return kinetic * kinetic + grad * g.cell_volume();
}

// ---------------------------------------------------------------- trace files

void write_trace(const std::filesystem::path& path, const SolutionTrace& trace) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot open " + path.string());
  io::write_magic(os, "LAMETRC1");
  io::write_grid_header(os, trace.grid());
  io::write_u32(os, static_cast<std::uint32_t>(trace.time.M));
  io::write_f64(os, trace.time.T);
  for (int k = 0; k <= trace.time.M; ++k) {
    io::write_payload(os, to_physical(trace.u[static_cast<std::size_t>(k)]));
    io::write_payload(os, to_physical(trace.dtu[static_cast<std::size_t>(k)]));
  }
  if (!os) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

SolutionTrace read_trace(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string());
  io::expect_magic(is, "LAMETRC1");
  const Grid g = io::read_grid_header(is);
  const int M = static_cast<int>(io::read_u32(is));
  const double T = io::read_f64(is);
  SolutionTrace tr;
  tr.time = TimeGrid::make(T, M);
  for (int k = 0; k <= M; ++k) {
    Field u = Field::vector(g), v = Field::vector(g);
    io::read_payload(is, u);
    io::read_payload(is, v);
    tr.u.push_back(std::move(u));
    tr.dtu.push_back(std::move(v));
  }
  return tr;
}

}  // namespace lame
