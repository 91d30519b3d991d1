#include "lame/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fft.hpp"
#include "lame/error.hpp"
#include "lame/field_io.hpp"
#include "lame/kernels.hpp"

namespace lame {

// ---------------------------------------------------------------- Potential

Potential::Potential(const Grid& grid, std::vector<double> values, double epsilon, std::string label)
    : grid_(grid), values_(std::move(values)), epsilon_(epsilon), label_(std::move(label)) {
  const std::size_t nn = static_cast<std::size_t>(grid.n * grid.n);
  if (values_.size() != nn * grid.size())
    throw Error(ErrorKind::ContractViolation, "potential needs n*n values per grid point");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidRegularization, "potential must be finite at every grid point");
}

std::span<const double> Potential::matrix(std::size_t flat) const {
  const std::size_t nn = static_cast<std::size_t>(grid_.n * grid_.n);
  return {values_.data() + flat * nn, nn};
}

RealField Potential::magnitude() const {
  RealField m(grid_);
  kernels::parallel_for(grid_.size(), [&](std::size_t flat) {
    double s = 0.0;
    for (double v : matrix(flat)) s += v * v;
    m.values[flat] = std::sqrt(s);
  });
  return m;
}

Field Potential::apply(const Field& u) const {
  if (!u.is_vector() || !(u.grid() == grid_)) throw Error(ErrorKind::ContractViolation, "potential/field grid mismatch");
  const Field p = to_physical(u);
  Field out = Field::vector(grid_);
  const int n = grid_.n;
  kernels::parallel_for(grid_.size(), [&](std::size_t flat) {
    const auto m = matrix(flat);
    for (int i = 0; i < n; ++i) {
      cplx acc{};
      for (int j = 0; j < n; ++j) acc += m[static_cast<std::size_t>(i * n + j)] * p.at(j, flat);
      out.at(i, flat) = acc;
    }
  });
  return out;
}

Potential Potential::scaled(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= c;
  Potential out(grid_, std::move(v), epsilon_, label_);
  out.p_ = p_;
  if (fp_norm_) out.fp_norm_ = std::abs(c) * *fp_norm_;
  return out;
}

namespace {

double origin_distance2(const Grid& g, std::size_t flat, std::vector<int>& idx) {
  g.unflatten(flat, idx);
  double d2 = 0.0;
  for (int d = 0; d < g.n; ++d) {
    const double a = g.axis_distance(idx[static_cast<std::size_t>(d)], g.N / 2);
    d2 += a * a;
  }
  return d2;
}

Potential isotropic_potential(const Grid& g, double epsilon, std::string label, auto&& profile) {
  const std::size_t nn = static_cast<std::size_t>(g.n * g.n);
  std::vector<double> values(nn * g.size(), 0.0);
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    const double v = profile(origin_distance2(g, flat, idx));
    for (int d = 0; d < g.n; ++d) values[flat * nn + static_cast<std::size_t>(d * g.n + d)] = v;
  }
  return Potential(g, std::move(values), epsilon, std::move(label));
}

}  // namespace

Potential inverse_square_potential(const Grid& grid, double epsilon, double amplitude) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorKind::InvalidRegularization, "inverse-square potential needs epsilon > 0");
  char label[96];
  std::snprintf(label, sizeof label, "inverse_square(a=%.6g,eps=%.6g)", amplitude, epsilon);
  const double e2 = epsilon * epsilon;
  return isotropic_potential(grid, epsilon, label, [&](double d2) { return amplitude / (d2 + e2); });
}

Potential bounded_compact_potential(const Grid& grid, double radius, double amplitude) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidParameter, "bounded_compact potential needs radius > 0");
  char label[96];
  std::snprintf(label, sizeof label, "bounded_compact(a=%.6g,rho=%.6g)", amplitude, radius);
  const double r2 = radius * radius;
  return isotropic_potential(grid, 0.0, label, [&](double d2) {
    const double s2 = d2 / r2;
    return s2 < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
  });
}

Potential read_potential(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string());
  io::expect_magic(is, "LAMEPOT1");
  const Grid g = io::read_grid_header(is);
  const std::size_t nn = static_cast<std::size_t>(g.n * g.n);
  std::vector<double> values(nn * g.size());
  for (std::size_t e = 0; e < nn; ++e)
    for (std::size_t flat = 0; flat < g.size(); ++flat) values[flat * nn + e] = io::read_f64(is);
  return Potential(g, std::move(values), 0.0, "file(" + path.filename().string() + ")");
}

void write_potential(const std::filesystem::path& path, const Potential& V) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot open " + path.string());
  io::write_magic(os, "LAMEPOT1");
  io::write_grid_header(os, V.grid());
  const std::size_t nn = static_cast<std::size_t>(V.grid().n * V.grid().n);
  for (std::size_t e = 0; e < nn; ++e)
    for (std::size_t flat = 0; flat < V.grid().size(); ++flat) io::write_f64(os, V.matrix(flat)[e]);
}

// ---------------------------------------------------------------- sampling

BallSampling BallSampling::dyadic(const Grid& grid, int stride, int max_radii) {
  if (stride < 1) throw Error(ErrorKind::InvalidParameter, "sampling stride must be >= 1");
  BallSampling s;
  const double h = grid.h();
  for (int k = 0;; ++k) {
    const double r = std::ldexp(h, k);
    if (r > 0.5 * grid.L * (1.0 + 1e-12)) break;
    s.radii.push_back(r);
  }
  if (max_radii > 0 && static_cast<int>(s.radii.size()) > max_radii)
    s.radii.erase(s.radii.begin(), s.radii.end() - max_radii);

  std::vector<int> idx(static_cast<std::size_t>(grid.n));
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    grid.unflatten(flat, idx);
    bool keep = true;
    for (int i : idx) keep = keep && ((i - grid.N / 2) % stride == 0);
    if (keep) s.centers.push_back(flat);
  }
  return s;
}

// ---------------------------------------------------------------- balls

std::vector<std::vector<int>> ball_offsets(const Grid& grid, double r) {
  if (!(r > 0.0) || r > 0.5 * grid.L * (1.0 + 1e-12))
    throw Error(ErrorKind::InvalidParameter, "ball radius must lie in (0, L/2]");
  const double h = grid.h();
  const int reach = std::min(grid.N / 2, static_cast<int>(std::ceil(r / h)));
  std::vector<std::vector<int>> out;
  std::vector<int> o(static_cast<std::size_t>(grid.n), -reach);
  while (true) {
    double d2 = 0.0;
    for (int v : o) d2 += (v * h) * (v * h);
    if (d2 < r * r) out.push_back(o);
    int d = grid.n - 1;
    while (d >= 0 && ++o[static_cast<std::size_t>(d)] > reach) {
      o[static_cast<std::size_t>(d)] = -reach;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

std::size_t ball_count(const Grid& grid, double r) { return ball_offsets(grid, r).size(); }

namespace {

struct BallKernel {
  CVector spectrum;  // unitary FFT of the indicator, times sqrt(size)
  std::size_t count = 0;
};

const BallKernel& ball_kernel(const Grid& g, double r) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double, double>, std::unique_ptr<BallKernel>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(g.n, g.N, g.L, r);
  if (auto it = cache.find(key); it != cache.end()) return *it->second;

  auto k = std::make_unique<BallKernel>();
  k->spectrum.assign(g.size(), cplx{});
  const auto offsets = ball_offsets(g, r);
  k->count = offsets.size();
  for (const auto& o : offsets) k->spectrum[g.flatten(o)] = 1.0;
  detail::fft_inplace(k->spectrum.data(), g, -1);
  const double scale = std::sqrt(static_cast<double>(g.size()));
  for (auto& v : k->spectrum) v *= scale;
  auto& ref = *k;
  cache.emplace(key, std::move(k));
  return ref;
}

struct SpectrumOf {
  CVector data;
  explicit SpectrumOf(const RealField& phi) : data(phi.values.begin(), phi.values.end()) {
    detail::fft_inplace(data.data(), phi.grid, -1);
  }
};

RealField convolve(const SpectrumOf& spec, const Grid& g, const BallKernel& k) {
  CVector work(g.size());
  kernels::parallel_for(g.size(), [&](std::size_t i) { work[i] = spec.data[i] * k.spectrum[i]; });
  detail::fft_inplace(work.data(), g, +1);
  RealField out(g);
  kernels::parallel_for(g.size(), [&](std::size_t i) { out.values[i] = work[i].real(); });
  return out;
}

RealField ball_sums_from(const SpectrumOf& spec, const RealField& phi, double r) {
  const BallKernel& k = ball_kernel(phi.grid, r);
  if (k.count == 1) return phi;
  return convolve(spec, phi.grid, k);
}

void require_positive(const RealField& w) {
  for (double v : w.values)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidWeight, "weight must be positive and finite");
}

void require_nonnegative(const RealField& w) {
  for (double v : w.values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidWeight, "input must be nonnegative and finite");
}

}  // namespace

RealField ball_sums(const RealField& phi, double r) {
  const SpectrumOf spec(phi);
  return ball_sums_from(spec, phi, r);
}

std::vector<double> ball_minima(const RealField& phi, double r, std::span<const std::size_t> centers) {
  const Grid& g = phi.grid;
  const auto offsets = ball_offsets(g, r);
  std::vector<double> out(centers.size());
  kernels::parallel_for(centers.size(), [&](std::size_t c) {
    std::vector<int> base(static_cast<std::size_t>(g.n)), idx(static_cast<std::size_t>(g.n));
    g.unflatten(centers[c], base);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : offsets) {
      for (int d = 0; d < g.n; ++d) idx[static_cast<std::size_t>(d)] = base[static_cast<std::size_t>(d)] + o[static_cast<std::size_t>(d)];
      best = std::min(best, phi.values[g.flatten(idx)]);
    }
    out[c] = best;
  });
  return out;
}

// ---------------------------------------------------------------- F^p

double fefferman_phong_norm(const RealField& magnitude, double p, const BallSampling& sampling) {
  const Grid& g = magnitude.grid;
  if (!(p >= 1.0) || !(p <= 0.5 * g.n))
    throw Error(ErrorKind::InvalidExponent, "Fefferman-Phong exponent must lie in [1, n/2]");
  RealField powv(g);
  for (std::size_t i = 0; i < g.size(); ++i) powv.values[i] = std::pow(magnitude.values[i], p);
  const SpectrumOf spec(powv);
  double best = 0.0;
  for (double r : sampling.radii) {
    const RealField s = ball_sums_from(spec, powv, r);
    const double scale = std::pow(r, 2.0 - g.n / p);
    for (std::size_t c : sampling.centers) {
      const double integral = std::max(0.0, s.values[c]) * g.cell_volume();
      best = std::max(best, scale * std::pow(integral, 1.0 / p));
    }
  }
  return best;
}

double fefferman_phong_norm(const Potential& V, double p, const BallSampling& sampling) {
  return fefferman_phong_norm(V.magnitude(), p, sampling);
}

std::vector<double> fefferman_phong_profile(const RealField& magnitude, double p, std::size_t center,
                                            std::span<const double> radii) {
  const Grid& g = magnitude.grid;
  if (!(p >= 1.0) || !(p <= 0.5 * g.n))
    throw Error(ErrorKind::InvalidExponent, "Fefferman-Phong exponent must lie in [1, n/2]");
  std::vector<double> out;
  std::vector<int> base(static_cast<std::size_t>(g.n)), idx(static_cast<std::size_t>(g.n));
  g.unflatten(center, base);
  for (double r : radii) {
    double s = 0.0;
    for (const auto& o : ball_offsets(g, r)) {
      for (int d = 0; d < g.n; ++d) idx[static_cast<std::size_t>(d)] = base[static_cast<std::size_t>(d)] + o[static_cast<std::size_t>(d)];
      s += std::pow(magnitude.values[g.flatten(idx)], p);
    }
    out.push_back(std::pow(r, 2.0 - g.n / p) * std::pow(s * g.cell_volume(), 1.0 / p));
  }
  return out;
}

// ---------------------------------------------------------------- maximal function

RealField maximal_function(const RealField& phi, std::span<const double> radii) {
  require_nonnegative(phi);
  const Grid& g = phi.grid;
  RealField out = phi;  // singleton cell
  const SpectrumOf spec(phi);
  for (double r : radii) {
    const BallKernel& k = ball_kernel(g, r);
    if (k.count == 1) continue;
    const RealField s = convolve(spec, g, k);
    const double inv = 1.0 / static_cast<double>(k.count);
    kernels::parallel_for(g.size(), [&](std::size_t i) { out.values[i] = std::max(out.values[i], s.values[i] * inv); });
  }
  return out;
}

RealField build_weight(const Potential& V, double delta, std::span<const double> radii) {
  if (!(delta > 1.0) || !(delta < V.p()))
    throw Error(ErrorKind::InvalidParameter, "weight exponent delta must lie in (1, p)");
  RealField m = V.magnitude();
  for (double& v : m.values) v = std::pow(v, delta);
  RealField w = maximal_function(m, radii);
  for (double& v : w.values) v = std::pow(v, 1.0 / delta);
  // |V| <= W holds exactly through the singleton ball; restore it against
  // the round trip through pow.
  const RealField mag = V.magnitude();
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = std::max(w.values[i], mag.values[i]);
  return w;
}

// ---------------------------------------------------------------- A_p

double a2_constant(const RealField& w, const BallSampling& sampling) {
  require_positive(w);
  const Grid& g = w.grid;
  RealField inv(g);
  for (std::size_t i = 0; i < g.size(); ++i) inv.values[i] = 1.0 / w.values[i];
  const SpectrumOf sw(w), si(inv);
  double best = 1.0;
  for (double r : sampling.radii) {
    const BallKernel& k = ball_kernel(g, r);
    if (k.count == 1) continue;  // singleton ball: product is exactly 1
    const RealField a = convolve(sw, g, k);
    const RealField b = convolve(si, g, k);
    const double c2 = 1.0 / (static_cast<double>(k.count) * static_cast<double>(k.count));
    for (std::size_t c : sampling.centers) best = std::max(best, a.values[c] * b.values[c] * c2);
  }
  return best;
}

double a1_constant(const RealField& w, const BallSampling& sampling) {
  require_positive(w);
  const Grid& g = w.grid;
  const SpectrumOf sw(w);
  double best = 1.0;
  for (double r : sampling.radii) {
    const BallKernel& k = ball_kernel(g, r);
    if (k.count == 1) continue;
    const RealField a = convolve(sw, g, k);
    const auto mins = ball_minima(w, r, sampling.centers);
    for (std::size_t i = 0; i < sampling.centers.size(); ++i)
      best = std::max(best, a.values[sampling.centers[i]] / static_cast<double>(k.count) / mins[i]);
  }
  return best;
}

// ---------------------------------------------------------------- elliptic tools

Field solve_poisson_div(const Field& F) {
  if (!F.is_vector()) throw Error(ErrorKind::ContractViolation, "solve_poisson_div expects a vector field");
  const Grid& g = F.grid();
  const auto& tab = spectral_tables(g);
  const Field s = to_spectral(F);
  Field psi = Field::scalar(g, Representation::Spectral);
  kernels::parallel_for(g.size(), [&](std::size_t flat) {
    const double xi2 = tab.xi2[flat];
    if (xi2 == 0.0) return;
    cplx acc{};
    for (int d = 0; d < g.n; ++d) acc += tab.component(d, flat) * s.at(d, flat);
    psi.at(0, flat) = cplx(0.0, 1.0) * acc / xi2;
  });
  return F.representation() == Representation::Physical ? to_physical(std::move(psi)) : psi;
}

HelmholtzPair helmholtz_via_poisson(const Field& F) {
  const Field grad_psi = gradient(solve_poisson_div(F));
  return {F + grad_psi, grad_psi * cplx(-1.0)};
}

Field riesz_gradient(const Field& F) {
  if (!F.is_vector()) throw Error(ErrorKind::ContractViolation, "riesz_gradient expects a vector field");
  const Grid& g = F.grid();
  Field out = Field::vector(g, F.representation());
  for (int k = 0; k < g.n; ++k) {
    const Field rk = riesz_transform(F.component_field(k), k);
    for (int j = 0; j < g.n; ++j) {
      const Field rjk = riesz_transform(rk, j);
      auto dst = out.component(j);
      auto src = rjk.component(0);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
  return out;
}

double elliptic_regularity_ratio(const Field& F, const RealField& W, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidParameter, "sign must be +1 or -1");
  require_positive(W);
  RealField w = W;
  if (sign < 0)
    for (double& v : w.values) v = 1.0 / v;
  const double den = weighted_l2(F, w);
  if (!(den > 0.0)) throw Error(ErrorKind::DegenerateInput, "F has zero weighted norm");
  return weighted_l2(gradient(solve_poisson_div(F)), w) / den;
}

}  // namespace lame
