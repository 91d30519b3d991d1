#pragma once

#include <vector>

namespace lame {

/// Uniform time samples t_k = k T / M, k = 0..M.
struct TimeGrid {
  double T = 1.0;
  int M = 32;

  static TimeGrid make(double T, int M);

  double dt() const { return T / M; }
  double time(int k) const { return k * T / M; }
  int samples() const { return M + 1; }
  /// Composite trapezoid weights over [0, t_k] (k defaults to M).
  std::vector<double> trapezoid_weights(int k = -1) const;
};

}  // namespace lame
