#include "reference/reference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "lame/error.hpp"

namespace lame::reference {

namespace {

double periodic_distance2(const Grid& g, std::span<const int> a, std::span<const int> b) {
  double d2 = 0.0;
  for (int d = 0; d < g.n; ++d) {
    const double v = g.axis_distance(a[static_cast<std::size_t>(d)], b[static_cast<std::size_t>(d)]);
    d2 += v * v;
  }
  return d2;
}

struct BallStats {
  double sum = 0.0;
  double inv_sum = 0.0;
  double min = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
};

BallStats ball_stats(const RealField& w, std::size_t center, double r) {
  const Grid& g = w.grid;
  std::vector<int> a(static_cast<std::size_t>(g.n)), b(static_cast<std::size_t>(g.n));
  g.unflatten(center, a);
  BallStats s;
  for (std::size_t y = 0; y < g.size(); ++y) {
    g.unflatten(y, b);
    if (periodic_distance2(g, a, b) >= r * r) continue;
    const double v = w.values[y];
    s.sum += v;
    s.inv_sum += 1.0 / v;
    s.min = std::min(s.min, v);
    ++s.count;
  }
  return s;
}

}  // namespace

RealField ball_sums(const RealField& phi, double r) {
  RealField out(phi.grid);
  for (std::size_t x = 0; x < phi.grid.size(); ++x) {
    const Grid& g = phi.grid;
    std::vector<int> a(static_cast<std::size_t>(g.n)), b(static_cast<std::size_t>(g.n));
    g.unflatten(x, a);
    double s = 0.0;
    for (std::size_t y = 0; y < g.size(); ++y) {
      g.unflatten(y, b);
      if (periodic_distance2(g, a, b) < r * r) s += phi.values[y];
    }
    out.values[x] = s;
  }
  return out;
}

std::vector<double> ball_minima(const RealField& phi, double r, std::span<const std::size_t> centers) {
  std::vector<double> out;
  for (std::size_t c : centers) out.push_back(ball_stats(phi, c, r).min);
  return out;
}

RealField maximal_function(const RealField& phi, std::span<const double> radii) {
  RealField out = phi;
  for (double r : radii) {
    const RealField s = reference::ball_sums(phi, r);
    const double count = static_cast<double>(ball_count(phi.grid, r));
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::max(out.values[i], s.values[i] / count);
  }
  return out;
}

double a2_constant(const RealField& w, const BallSampling& sampling) {
  double best = 1.0;
  for (double r : sampling.radii)
    for (std::size_t c : sampling.centers) {
      const BallStats s = ball_stats(w, c, r);
      best = std::max(best, (s.sum / s.count) * (s.inv_sum / s.count));
    }
  return best;
}

double a1_constant(const RealField& w, const BallSampling& sampling) {
  double best = 1.0;
  for (double r : sampling.radii)
    for (std::size_t c : sampling.centers) {
      const BallStats s = ball_stats(w, c, r);
      best = std::max(best, (s.sum / s.count) / s.min);
    }
  return best;
}

Field duhamel(std::span<const Field> F, const TimeGrid& time, const LameParams& params, int t_index) {
  const auto weights = time.trapezoid_weights(t_index);
  Field acc = Field::vector(F.front().grid());
  for (int j = 0; j <= t_index && t_index > 0; ++j) {
    const Field src = remove_mean(F[static_cast<std::size_t>(j)]);
    acc += sine_propagator(src, time.time(t_index) - time.time(j), params) * cplx(weights[static_cast<std::size_t>(j)]);
  }
  return acc;
}

Field matrix_function(const Field& f, const LameParams& params, const BranchSymbol& phi) {
  const Grid& g = f.grid();
  const int n = g.n;
  const auto& tab = spectral_tables(g);
  Field s = to_spectral(f);
  std::vector<double> xi(static_cast<std::size_t>(n));
  for (std::size_t flat = 0; flat < g.size(); ++flat) {
    for (int d = 0; d < n; ++d) xi[static_cast<std::size_t>(d)] = tab.component(d, flat);
    const SmallMatrix L = lame_symbol(xi, params);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = L(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    Eigen::VectorXcd phis(n);
    for (int i = 0; i < n; ++i) phis(i) = phi(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
    const Eigen::MatrixXcd U = es.eigenvectors().cast<cplx>();
    const Eigen::MatrixXcd Phi = U * phis.asDiagonal() * U.transpose();
    Eigen::VectorXcd v(n);
    for (int d = 0; d < n; ++d) v(d) = s.at(d, flat);
    const Eigen::VectorXcd out = Phi * v;
    for (int d = 0; d < n; ++d) s.at(d, flat) = out(d);
  }
  return f.representation() == Representation::Physical ? to_physical(std::move(s)) : s;
}

std::vector<double> symbol_eigenvalues(std::span<const double> xi, const LameParams& params) {
  const int n = static_cast<int>(xi.size());
  const SmallMatrix L = lame_symbol(xi, params);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = L(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lame::reference
