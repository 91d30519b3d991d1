#include "lame/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fft.hpp"
#include "lame/error.hpp"
#include "lame/kernels.hpp"

namespace lame {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ContractViolation: return "contract violation";
    case ErrorKind::InvalidExponent: return "invalid exponent";
    case ErrorKind::InvalidWeight: return "invalid weight";
    case ErrorKind::InvalidRegularization: return "invalid regularization";
    case ErrorKind::InvalidParameter: return "invalid parameter";
    case ErrorKind::MultiplierSingularity: return "multiplier singularity";
    case ErrorKind::DegenerateInput: return "degenerate input";
    case ErrorKind::NoContraction: return "no contraction";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::InvalidConfig: return "invalid config";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

// ---------------------------------------------------------------- Grid

Grid Grid::make(int n, int N, double L) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "grid dimension must be >= 1");
  if (N < 2 || (N & (N - 1)) != 0)
    throw Error(ErrorKind::InvalidParameter, "points per axis must be a power of two >= 2");
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::InvalidParameter, "side length must be positive");
  return Grid{n, N, L};
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int d = 0; d < n; ++d) s *= static_cast<std::size_t>(N);
  return s;
}

double Grid::cell_volume() const { return std::pow(h(), n); }
double Grid::volume() const { return std::pow(L, n); }

double Grid::axis_distance(int a, int b) const {
  int d = std::abs(a - b) % N;
  return std::min(d, N - d) * h();
}

void Grid::unflatten(std::size_t flat, std::span<int> idx) const {
  for (int d = n - 1; d >= 0; --d) {
    idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(N));
    flat /= static_cast<std::size_t>(N);
  }
}

std::size_t Grid::flatten(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < n; ++d) {
    int i = ((idx[static_cast<std::size_t>(d)] % N) + N) % N;
    flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::size_t Grid::origin() const {
  std::vector<int> idx(static_cast<std::size_t>(n), N / 2);
  return flatten(idx);
}

TimeGrid TimeGrid::make(double T, int M) {
  if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidParameter, "final time must be positive");
  if (M < 1) throw Error(ErrorKind::InvalidParameter, "time steps must be >= 1");
  return TimeGrid{T, M};
}

std::vector<double> TimeGrid::trapezoid_weights(int k) const {
  if (k < 0) k = M;
  std::vector<double> w(static_cast<std::size_t>(k) + 1, dt());
  if (k == 0) {
    w[0] = 0.0;
    return w;
  }
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

const SpectralTables& spectral_tables(const Grid& grid) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<SpectralTables>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(grid.n, grid.N, grid.L);
  if (auto it = cache.find(key); it != cache.end()) return *it->second;

  auto t = std::make_unique<SpectralTables>();
  const std::size_t size = grid.size();
  t->xi.resize(static_cast<std::size_t>(grid.n) * size);
  t->abs_xi.resize(size);
  t->xi2.resize(size);
  const double k0 = 2.0 * std::numbers::pi / grid.L;
  std::vector<int> idx(static_cast<std::size_t>(grid.n));
  for (std::size_t flat = 0; flat < size; ++flat) {
    grid.unflatten(flat, idx);
    double s = 0.0;
    for (int d = 0; d < grid.n; ++d) {
      double x = k0 * grid.wavenumber(idx[static_cast<std::size_t>(d)]);
      t->xi[static_cast<std::size_t>(d) * size + flat] = x;
      s += x * x;
    }
    t->xi2[flat] = s;
    t->abs_xi[flat] = std::sqrt(s);
  }
  auto& ref = *t;
  cache.emplace(key, std::move(t));
  return ref;
}

// ---------------------------------------------------------------- Field

Field::Field(const Grid& grid, int components, Representation rep)
    : grid_(grid), components_(components), points_(grid.size()), rep_(rep),
      data_(static_cast<std::size_t>(components) * grid.size(), cplx{}) {}

namespace {

void require_compatible(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components() || a.representation() != b.representation())
    throw Error(ErrorKind::ContractViolation, "field shape or representation mismatch");
}

}  // namespace

Field& Field::operator+=(const Field& o) {
  require_compatible(*this, o);
  auto* d = data_.data();
  const auto* s = o.data_.data();
  kernels::parallel_for(data_.size(), [&](std::size_t i) { d[i] += s[i]; });
  return *this;
}

Field& Field::operator-=(const Field& o) {
  require_compatible(*this, o);
  auto* d = data_.data();
  const auto* s = o.data_.data();
  kernels::parallel_for(data_.size(), [&](std::size_t i) { d[i] -= s[i]; });
  return *this;
}

Field& Field::operator*=(cplx c) {
  auto* d = data_.data();
  kernels::parallel_for(data_.size(), [&](std::size_t i) { d[i] *= c; });
  return *this;
}

double Field::max_abs() const {
  const auto* d = data_.data();
  return kernels::parallel_max(data_.size(), [&](std::size_t i) { return std::abs(d[i]); });
}

Field Field::component_field(int j) const {
  Field out(grid_, 1, rep_);
  auto src = component(j);
  std::copy(src.begin(), src.end(), out.component(0).begin());
  return out;
}

double RealField::max() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
double RealField::min() const { return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end()); }

// ---------------------------------------------------------------- transforms

Field forward_transform(const Field& f) {
  if (f.representation() != Representation::Physical)
    throw Error(ErrorKind::ContractViolation, "forward_transform expects a physical field");
  Field out = f;
  for (int j = 0; j < out.components(); ++j) detail::fft_inplace(out.component(j).data(), f.grid(), -1);
  out.set_representation(Representation::Spectral);
  return out;
}

Field inverse_transform(const Field& f) {
  if (f.representation() != Representation::Spectral)
    throw Error(ErrorKind::ContractViolation, "inverse_transform expects a spectral field");
  Field out = f;
  for (int j = 0; j < out.components(); ++j) detail::fft_inplace(out.component(j).data(), f.grid(), +1);
  out.set_representation(Representation::Physical);
  return out;
}

Field to_spectral(Field f) {
  if (f.representation() == Representation::Spectral) return f;
  for (int j = 0; j < f.components(); ++j) detail::fft_inplace(f.component(j).data(), f.grid(), -1);
  f.set_representation(Representation::Spectral);
  return f;
}

Field to_physical(Field f) {
  if (f.representation() == Representation::Physical) return f;
  for (int j = 0; j < f.components(); ++j) detail::fft_inplace(f.component(j).data(), f.grid(), +1);
  f.set_representation(Representation::Physical);
  return f;
}

std::vector<cplx> component_means(const Field& f) {
  std::vector<cplx> means(static_cast<std::size_t>(f.components()));
  const double inv = 1.0 / static_cast<double>(f.points());
  for (int j = 0; j < f.components(); ++j) {
    if (f.representation() == Representation::Spectral) {
      // unitary normalization: zero coefficient = sqrt(size) * mean
      means[static_cast<std::size_t>(j)] = f.at(j, 0) * std::sqrt(inv);
    } else {
      auto c = f.component(j);
      double re = kernels::parallel_sum(c.size(), [&](std::size_t i) { return c[i].real(); });
      double im = kernels::parallel_sum(c.size(), [&](std::size_t i) { return c[i].imag(); });
      means[static_cast<std::size_t>(j)] = cplx(re, im) * inv;
    }
  }
  return means;
}

Field remove_mean(Field f) {
  if (f.representation() == Representation::Spectral) {
    for (int j = 0; j < f.components(); ++j) f.at(j, 0) = 0.0;
    return f;
  }
  auto means = component_means(f);
  for (int j = 0; j < f.components(); ++j) {
    auto c = f.component(j);
    const cplx m = means[static_cast<std::size_t>(j)];
    kernels::parallel_for(c.size(), [&](std::size_t i) { c[i] -= m; });
  }
  return f;
}

// ---------------------------------------------------------------- multipliers

namespace {

/// Multiplies every component by sym(flat) in spectral space and restores
/// the input representation.
template <class Symbol>
Field multiply_spectral(const Field& f, Symbol&& sym) {
  const Representation rep = f.representation();
  Field s = to_spectral(f);
  const std::size_t size = s.points();
  kernels::parallel_for(size, [&](std::size_t flat) {
    const cplx m = sym(flat);
    for (int j = 0; j < s.components(); ++j) s.at(j, flat) *= m;
  });
  return rep == Representation::Physical ? to_physical(std::move(s)) : s;
}

}  // namespace

Field apply_scalar_multiplier(const Field& f, const ScalarSymbol& m) {
  const auto& tab = spectral_tables(f.grid());
  const int n = f.grid().n;
  return multiply_spectral(f, [&](std::size_t flat) {
    double xi[8];
    for (int d = 0; d < n; ++d) xi[d] = tab.component(d, flat);
    return m(std::span<const double>(xi, static_cast<std::size_t>(n)), tab.abs_xi[flat]);
  });
}

Field fractional_multiplier(const Field& f, double s) {
  const auto& tab = spectral_tables(f.grid());
  return multiply_spectral(f, [&](std::size_t flat) -> cplx {
    const double a = tab.abs_xi[flat];
    return a == 0.0 ? 0.0 : std::pow(a, s);
  });
}

Field bessel_multiplier(const Field& f, double s) {
  const auto& tab = spectral_tables(f.grid());
  return multiply_spectral(f, [&](std::size_t flat) -> cplx { return std::pow(1.0 + tab.xi2[flat], 0.5 * s); });
}

Field riesz_transform(const Field& phi, int axis) {
  if (axis < 0 || axis >= phi.grid().n) throw Error(ErrorKind::InvalidParameter, "Riesz axis out of range");
  const auto& tab = spectral_tables(phi.grid());
  return multiply_spectral(phi, [&](std::size_t flat) -> cplx {
    const double a = tab.abs_xi[flat];
    return a == 0.0 ? cplx{} : cplx(0.0, tab.component(axis, flat) / a);
  });
}

Field gradient(const Field& phi) {
  if (phi.components() != 1) throw Error(ErrorKind::ContractViolation, "gradient expects a scalar field");
  const Grid& g = phi.grid();
  const auto& tab = spectral_tables(g);
  Field s = to_spectral(phi);
  Field out = Field::vector(g, Representation::Spectral);
  kernels::parallel_for(g.size(), [&](std::size_t flat) {
    for (int d = 0; d < g.n; ++d) out.at(d, flat) = cplx(0.0, tab.component(d, flat)) * s.at(0, flat);
  });
  return phi.representation() == Representation::Physical ? to_physical(std::move(out)) : out;
}

Field divergence(const Field& f) {
  if (!f.is_vector()) throw Error(ErrorKind::ContractViolation, "divergence expects a vector field");
  const Grid& g = f.grid();
  const auto& tab = spectral_tables(g);
  Field s = to_spectral(f);
  Field out = Field::scalar(g, Representation::Spectral);
  kernels::parallel_for(g.size(), [&](std::size_t flat) {
    cplx acc{};
    for (int d = 0; d < g.n; ++d) acc += cplx(0.0, tab.component(d, flat)) * s.at(d, flat);
    out.at(0, flat) = acc;
  });
  return f.representation() == Representation::Physical ? to_physical(std::move(out)) : out;
}

Field laplacian(const Field& f) {
  const auto& tab = spectral_tables(f.grid());
  return multiply_spectral(f, [&](std::size_t flat) -> cplx { return -tab.xi2[flat]; });
}

// ---------------------------------------------------------------- norms

double lebesgue_norm(const Field& f, double r) {
  if (!(r >= 1.0)) throw Error(ErrorKind::InvalidExponent, "Lebesgue exponent must be >= 1");
  const Field p = to_physical(f);
  const auto d = p.data();
  if (std::isinf(r)) return kernels::parallel_max(d.size(), [&](std::size_t i) { return std::abs(d[i]); });
  double sum;
  if (r == 2.0) {
    sum = kernels::parallel_sum(d.size(), [&](std::size_t i) { return std::norm(d[i]); });
  } else {
    sum = kernels::parallel_sum(d.size(), [&](std::size_t i) { return std::pow(std::abs(d[i]), r); });
  }
  return std::pow(sum * f.grid().cell_volume(), 1.0 / r);
}

double sobolev_norm(const Field& f, const SobolevIndex& idx) {
  if (!(idx.r >= 1.0)) throw Error(ErrorKind::InvalidExponent, "Sobolev integrability exponent must be >= 1");
  const Grid& g = f.grid();
  const auto& tab = spectral_tables(g);
  auto symbol = [&](std::size_t flat) -> double {
    if (idx.homogeneous) {
      const double a = tab.abs_xi[flat];
      return a == 0.0 ? 0.0 : std::pow(a, idx.s);
    }
    return std::pow(1.0 + tab.xi2[flat], 0.5 * idx.s);
  };
  if (idx.r == 2.0) {
    const Field s = to_spectral(f);
    const double sum = kernels::parallel_sum(g.size(), [&](std::size_t flat) {
      const double m = symbol(flat);
      double acc = 0.0;
      for (int j = 0; j < s.components(); ++j) acc += std::norm(s.at(j, flat));
      return m * m * acc;
    });
    return std::sqrt(sum * g.cell_volume());
  }
  const Field m = idx.homogeneous ? fractional_multiplier(f, idx.s) : bessel_multiplier(f, idx.s);
  return lebesgue_norm(m, idx.r);
}

double l2_norm(const Field& f) { return lebesgue_norm(f, 2.0); }

cplx inner_product(const Field& f, const Field& g) {
  const Field a = to_physical(f);
  const Field b = to_physical(g);
  require_compatible(a, b);
  const auto x = a.data();
  const auto y = b.data();
  double re = kernels::parallel_sum(x.size(), [&](std::size_t i) { return (x[i] * std::conj(y[i])).real(); });
  double im = kernels::parallel_sum(x.size(), [&](std::size_t i) { return (x[i] * std::conj(y[i])).imag(); });
  return cplx(re, im) * f.grid().cell_volume();
}

RealField pointwise_norm2(const Field& f) {
  const Field p = to_physical(f);
  RealField out(f.grid());
  kernels::parallel_for(p.points(), [&](std::size_t i) {
    double acc = 0.0;
    for (int j = 0; j < p.components(); ++j) acc += std::norm(p.at(j, i));
    out.values[i] = acc;
  });
  return out;
}

namespace {

void require_nonnegative(const RealField& w) {
  for (double v : w.values)
    if (!(v >= 0.0)) throw Error(ErrorKind::InvalidWeight, "weight must be nonnegative and finite");
}

double weighted_sum(const Field& p, const RealField& w) {
  return kernels::parallel_sum(p.points(), [&](std::size_t i) {
    double acc = 0.0;
    for (int j = 0; j < p.components(); ++j) acc += std::norm(p.at(j, i));
    return acc * w.values[i];
  });
}

}  // namespace

double weighted_l2(const Field& f, const RealField& w) {
  require_nonnegative(w);
  const Field p = to_physical(f);
  return std::sqrt(weighted_sum(p, w) * f.grid().cell_volume());
}

double weighted_l2_spacetime(std::span<const Field> samples, const RealField& w,
                             std::span<const double> time_weights) {
  if (samples.size() != time_weights.size())
    throw Error(ErrorKind::ContractViolation, "one time weight per sample required");
  require_nonnegative(w);
  double total = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (time_weights[k] == 0.0) continue;
    const Field p = to_physical(samples[k]);
    total += time_weights[k] * weighted_sum(p, w);
  }
  const double vol = samples.empty() ? 0.0 : samples.front().grid().cell_volume();
  return std::sqrt(total * vol);
}

double weighted_l2_spacetime(std::span<const Field> samples, const RealField& w, const TimeGrid& time) {
  if (samples.size() != static_cast<std::size_t>(time.samples()))
    throw Error(ErrorKind::ContractViolation, "sample count must equal M + 1");
  const auto tw = time.trapezoid_weights();
  return weighted_l2_spacetime(samples, w, tw);
}

}  // namespace lame
