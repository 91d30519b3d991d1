#pragma once

// OpenMP loop primitives shared by every module. Reductions are blocked with
// a block size that does not depend on the thread count, and the block
// partials are combined serially, so results are bit-identical for any
// LAME_THREADS setting.

#include <algorithm>
#include <cstddef>
#include <vector>

#include <omp.h>

namespace lame::kernels {

inline constexpr std::size_t kReduceBlock = 4096;

/// Caps the OpenMP pool from the LAME_THREADS environment variable (if set).
void configure_threads_from_env();

int max_threads();

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
}

template <class Fn>
double parallel_sum(std::size_t count, Fn&& fn) {
  const std::size_t blocks = (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t hi = std::min(count, lo + kReduceBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += fn(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

template <class Fn>
double parallel_max(std::size_t count, Fn&& fn, double init = 0.0) {
  double best = init;
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) reduction(max : best)
  for (std::ptrdiff_t i = 0; i < n; ++i) best = std::max(best, fn(static_cast<std::size_t>(i)));
  return best;
}

}  // namespace lame::kernels
