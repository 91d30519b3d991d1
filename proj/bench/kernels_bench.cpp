// Parallel kernels against their serial references on the same inputs.
// LAME_THREADS caps the OpenMP pool for the parallel side.

#include <benchmark/benchmark.h>

#include <cmath>

#include "lame/kernels.hpp"
#include "lame/rng.hpp"
#include "lame/solver.hpp"
#include "lame/weights.hpp"
#include "reference/reference.hpp"

namespace {

using namespace lame;

RealField random_positive(const Grid& g, std::uint64_t seed) {
  SplitMix64 rng(seed);
  RealField w(g);
  for (double& v : w.values) v = rng.uniform(0.1, 2.0);
  return w;
}

std::vector<Field> random_sources(const Grid& g, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Field> out;
  for (int k = 0; k < count; ++k) {
    Field f = Field::vector(g);
    for (auto& v : f.data()) v = rng.uniform(-1.0, 1.0);
    out.push_back(remove_mean(std::move(f)));
  }
  return out;
}

void BM_BallSums_Parallel(benchmark::State& state) {
  const Grid g = Grid::make(3, static_cast<int>(state.range(0)), 2.0 * M_PI);
  const RealField phi = random_positive(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ball_sums(phi, 3.0 * g.h()));
}
void BM_BallSums_Serial(benchmark::State& state) {
  const Grid g = Grid::make(3, static_cast<int>(state.range(0)), 2.0 * M_PI);
  const RealField phi = random_positive(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::ball_sums(phi, 3.0 * g.h()));
}

void BM_MaximalFunction_Parallel(benchmark::State& state) {
  const Grid g = Grid::make(3, static_cast<int>(state.range(0)), 2.0 * M_PI);
  const RealField phi = random_positive(g, 2);
  const std::vector<double> radii{g.h(), 2.0 * g.h(), 4.0 * g.h()};
  for (auto _ : state) benchmark::DoNotOptimize(maximal_function(phi, radii));
}
void BM_MaximalFunction_Serial(benchmark::State& state) {
  const Grid g = Grid::make(3, static_cast<int>(state.range(0)), 2.0 * M_PI);
  const RealField phi = random_positive(g, 2);
  const std::vector<double> radii{g.h(), 2.0 * g.h(), 4.0 * g.h()};
  for (auto _ : state) benchmark::DoNotOptimize(reference::maximal_function(phi, radii));
}

void BM_A1_Parallel(benchmark::State& state) {
  const Grid g = Grid::make(3, static_cast<int>(state.range(0)), 2.0 * M_PI);
  const RealField w = random_positive(g, 3);
  const BallSampling s = BallSampling::dyadic(g, 4);
  for (auto _ : state) benchmark::DoNotOptimize(a1_constant(w, s));
}
void BM_A1_Serial(benchmark::State& state) {
  const Grid g = Grid::make(3, static_cast<int>(state.range(0)), 2.0 * M_PI);
  const RealField w = random_positive(g, 3);
  const BallSampling s = BallSampling::dyadic(g, 4);
  for (auto _ : state) benchmark::DoNotOptimize(reference::a1_constant(w, s));
}

void BM_Duhamel_Streaming(benchmark::State& state) {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const TimeGrid time = TimeGrid::make(1.0, static_cast<int>(state.range(0)));
  const auto F = random_sources(g, time.samples(), 4);
  const LameParams p{};
  for (auto _ : state) benchmark::DoNotOptimize(duhamel_all(F, time, p));
}
void BM_Duhamel_Direct(benchmark::State& state) {
  const Grid g = Grid::make(3, 16, 2.0 * M_PI);
  const TimeGrid time = TimeGrid::make(1.0, static_cast<int>(state.range(0)));
  const auto F = random_sources(g, time.samples(), 4);
  const LameParams p{};
  for (auto _ : state)
    for (int k = 0; k <= time.M; ++k) benchmark::DoNotOptimize(reference::duhamel(F, time, p, k));
}

}  // namespace

BENCHMARK(BM_BallSums_Parallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallSums_Serial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaximalFunction_Parallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaximalFunction_Serial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_A1_Parallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_A1_Serial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Duhamel_Streaming)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Duhamel_Direct)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  lame::kernels::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
