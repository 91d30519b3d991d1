#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "lame/grid.hpp"
#include "lame/rng.hpp"

namespace test {

using lame::cplx;

inline double max_diff(const lame::Field& a, const lame::Field& b) {
  const lame::Field pa = lame::to_physical(a), pb = lame::to_physical(b);
  double m = 0.0;
  for (std::size_t i = 0; i < pa.data().size(); ++i) m = std::max(m, std::abs(pa.data()[i] - pb.data()[i]));
  return m;
}

inline double rel_diff(const lame::Field& a, const lame::Field& b) {
  const double s = std::max(lame::to_physical(a).max_abs(), lame::to_physical(b).max_abs());
  return s == 0.0 ? 0.0 : max_diff(a, b) / s;
}

/// Vector field a * exp(i k . x) (complex, single Fourier mode).
inline lame::Field complex_mode(const lame::Grid& g, std::vector<int> k, std::vector<double> a) {
  lame::Field f = lame::Field::vector(g);
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  const double k0 = 2.0 * M_PI / g.L;
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    g.unflatten(flat, idx);
    double ph = 0.0;
    for (int d = 0; d < g.n; ++d) ph += k0 * k[static_cast<std::size_t>(d)] * g.coord(idx[static_cast<std::size_t>(d)]);
    for (int d = 0; d < g.n; ++d) f.at(d, flat) = a[static_cast<std::size_t>(d)] * std::polar(1.0, ph);
  }
  return f;
}

/// Spectrally random band-limited real vector field with mean zero.
inline lame::Field random_field(const lame::Grid& g, lame::SplitMix64& rng, int band = 4) {
  lame::Field f = lame::Field::vector(g);
  std::vector<int> idx(static_cast<std::size_t>(g.n));
  const int modes = 12;
  for (int m = 0; m < modes; ++m) {
    std::vector<int> k(static_cast<std::size_t>(g.n));
    for (int& v : k) v = static_cast<int>(std::floor(rng.uniform() * (2 * band + 1))) - band;
    std::vector<double> a(static_cast<std::size_t>(g.n));
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const double k0 = 2.0 * M_PI / g.L;
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
      g.unflatten(flat, idx);
      double ph = phase;
      for (int d = 0; d < g.n; ++d) ph += k0 * k[static_cast<std::size_t>(d)] * g.coord(idx[static_cast<std::size_t>(d)]);
      const double c = std::cos(ph);
      for (int d = 0; d < g.n; ++d) f.at(d, flat) += a[static_cast<std::size_t>(d)] * c;
    }
  }
  return lame::remove_mean(std::move(f));
}

}  // namespace test
