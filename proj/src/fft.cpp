#include "fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace lame::detail {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(const Grid& grid, int sign) {
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(grid.n, grid.N, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(grid.n), grid.N);
    auto* scratch = fftw_alloc_complex(grid.size());
    fftw_plan plan = fftw_plan_dft(grid.n, dims.data(), scratch, scratch,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(scratch);
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_inplace(cplx* data, const Grid& grid, int sign) {
  fftw_plan plan = cache().get(grid, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  const std::size_t count = grid.size();
  for (std::size_t i = 0; i < count; ++i) data[i] *= scale;
}

}  // namespace lame::detail
