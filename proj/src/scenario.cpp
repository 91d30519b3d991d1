#include "lame/app/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lame/error.hpp"
#include "lame/kernels.hpp"

namespace lame::app {

namespace {

constexpr double kTwoPi = 6.283185307179586;

struct Blob {
  std::vector<double> center;
  std::vector<double> amplitude;
  double width = 1.0;
};

/// Signed periodic displacement x - c along one axis.
double wrap(double d, double L) { return d - L * std::floor(d / L + 0.5); }

template <class Profile>
Field superpose(const Grid& grid, const std::vector<Blob>& blobs, Profile&& profile) {
  Field out = Field::vector(grid);
  const int n = grid.n;
  kernels::parallel_for(grid.size(), [&](std::size_t flat) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    grid.unflatten(flat, idx);
    for (const Blob& b : blobs) {
      double d2 = 0.0;
      for (int d = 0; d < n; ++d) {
        const double x = wrap(grid.coord(idx[static_cast<std::size_t>(d)]) - b.center[static_cast<std::size_t>(d)], grid.L);
        d2 += x * x;
      }
      const double v = profile(d2, b.width);
      if (v == 0.0) continue;
      for (int d = 0; d < n; ++d) out.at(d, flat) += v * b.amplitude[static_cast<std::size_t>(d)];
    }
  });
  return out;
}

/// Centres uniform in the ball of radius `reach` (rejection from the cube).
std::vector<Blob> draw_blobs(const Grid& grid, SplitMix64& rng, int count, double reach, double width) {
  std::vector<Blob> blobs(static_cast<std::size_t>(count));
  for (Blob& b : blobs) {
    double r2 = 0.0;
    do {
      b.center.clear();
      r2 = 0.0;
      for (int d = 0; d < grid.n; ++d) {
        b.center.push_back(rng.uniform(-reach, reach));
        r2 += b.center.back() * b.center.back();
      }
    } while (r2 > reach * reach);
    for (int d = 0; d < grid.n; ++d) b.amplitude.push_back(rng.uniform(-1.0, 1.0));
    b.width = width;
  }
  return blobs;
}

double gaussian(double d2, double w) { return std::exp(-0.5 * d2 / (w * w)); }

double bump(double d2, double w) {
  const double s2 = d2 / (w * w);
  return s2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
}

std::vector<int> draw_wavevector(const Grid& grid, SplitMix64& rng) {
  std::vector<int> k(static_cast<std::size_t>(grid.n));
  do {
    for (int& v : k) v = static_cast<int>(std::floor(rng.uniform() * 5.0)) - 2;
  } while (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; }));
  return k;
}

Field plane_pair(const Grid& grid, SplitMix64& rng) {
  const int n = grid.n;
  // Shear mode: amplitude orthogonal to k.
  const auto ks = draw_wavevector(grid, rng);
  std::vector<double> a(static_cast<std::size_t>(n));
  for (double& v : a) v = rng.uniform(-1.0, 1.0);
  double kk = 0.0, ka = 0.0;
  for (int d = 0; d < n; ++d) {
    kk += ks[static_cast<std::size_t>(d)] * ks[static_cast<std::size_t>(d)];
    ka += ks[static_cast<std::size_t>(d)] * a[static_cast<std::size_t>(d)];
  }
  for (int d = 0; d < n; ++d) a[static_cast<std::size_t>(d)] -= ka / kk * ks[static_cast<std::size_t>(d)];
  if (n == 1) a[0] = 0.0;
  // Pressure mode: amplitude along k.
  const auto kp = draw_wavevector(grid, rng);
  const double s = rng.uniform(-1.0, 1.0);
  double kpn = 0.0;
  for (int v : kp) kpn += v * v;
  kpn = std::sqrt(kpn);
  std::vector<double> b(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) b[static_cast<std::size_t>(d)] = s * kp[static_cast<std::size_t>(d)] / kpn;
  return plane_wave(grid, ks, a) + plane_wave(grid, kp, b);
}

}  // namespace

bool is_family(const std::string& name) { return name == "gaussian" || name == "bump" || name == "plane_wave"; }

Field plane_wave(const Grid& grid, std::span<const int> k, std::span<const double> amplitude) {
  Field out = Field::vector(grid);
  const double k0 = kTwoPi / grid.L;
  kernels::parallel_for(grid.size(), [&](std::size_t flat) {
    std::vector<int> idx(static_cast<std::size_t>(grid.n));
    grid.unflatten(flat, idx);
    double phase = 0.0;
    for (int d = 0; d < grid.n; ++d) phase += k0 * k[static_cast<std::size_t>(d)] * grid.coord(idx[static_cast<std::size_t>(d)]);
    const double c = std::cos(phase);
    for (int d = 0; d < grid.n; ++d) out.at(d, flat) = amplitude[static_cast<std::size_t>(d)] * c;
  });
  return out;
}

Field random_smooth_field(const Grid& grid, SplitMix64& rng) {
  std::vector<Blob> blobs;
  for (int i = 0; i < 6; ++i) {
    const double width = rng.uniform(2.0 * grid.h(), grid.L / 8.0);
    auto b = draw_blobs(grid, rng, 1, 0.5 * grid.L, width);  // wraps periodically
    blobs.push_back(std::move(b.front()));
  }
  return remove_mean(superpose(grid, blobs, gaussian));
}

InitialData make_data(const Grid& grid, const DataSpec& spec) {
  if (!is_family(spec.family)) throw Error(ErrorKind::InvalidConfig, "unknown data family '" + spec.family + "'");
  if (!(spec.support_radius > 0.0)) throw Error(ErrorKind::InvalidConfig, "support_radius must be positive");
  SplitMix64 rng(spec.seed);
  const double R = spec.support_radius;
  InitialData data;
  if (spec.family == "plane_wave") {
    data.f = plane_pair(grid, rng);
    data.g = plane_pair(grid, rng);
  } else if (spec.family == "gaussian") {
    data.f = superpose(grid, draw_blobs(grid, rng, 3, 0.5 * R, R / 6.0), gaussian);
    data.g = superpose(grid, draw_blobs(grid, rng, 3, 0.5 * R, R / 6.0), gaussian);
  } else {
    data.f = superpose(grid, draw_blobs(grid, rng, 3, 0.5 * R, 0.5 * R), bump);
    data.g = superpose(grid, draw_blobs(grid, rng, 3, 0.5 * R, 0.5 * R), bump);
  }
  data.f = remove_mean(std::move(data.f));
  data.g = remove_mean(std::move(data.g));
  return data;
}

}  // namespace lame::app
