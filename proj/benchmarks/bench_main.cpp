#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "sklab/cadlag.hpp"
#include "sklab/experiments.hpp"
#include "sklab/limits.hpp"
#include "sklab/models.hpp"
#include "sklab/rng.hpp"
#include "sklab/skorokhod.hpp"

namespace {

sklab::CadlagPath random_path(sklab::Philox& rng, std::size_t jumps) {
  std::vector<double> times(jumps);
  for (auto& t : times) {
    t = 0.02 + 0.96 * rng.uniform();
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<double> values(times.size());
  for (auto& v : values) {
    v = 2.0 * rng.uniform() - 1.0;
  }
  return {1, {0.0}, std::move(times), std::move(values)};
}

std::vector<double> random_sample(std::size_t n, std::uint64_t seed) {
  sklab::Philox rng(seed, 0);
  std::vector<double> x(n);
  sklab::moving_maxima_sequence(rng, sklab::MovingMaximaModel::mm11(0.5), x);
  return x;
}

}  // namespace

static void BM_M1Distance(benchmark::State& state) {
  sklab::Philox rng(42, 0);
  const auto x = random_path(rng, static_cast<std::size_t>(state.range(0)));
  const auto y = random_path(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sklab::m1_distance(x, y));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_M1Distance)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_M1DistanceMonotone(benchmark::State& state) {
  const auto sample = random_sample(static_cast<std::size_t>(state.range(0)), 7);
  const auto x = sklab::CadlagPath::from_samples(sample, 1, sklab::SampleRule::RunningMax);
  const auto y = sklab::CadlagPath::from_samples(sample, 1, sklab::SampleRule::CumulativeSum);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sklab::m1_distance_monotone(x, y));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_M1DistanceMonotone)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_OmegaDelta(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto sample = random_sample(n, 11);
  const auto path = sklab::gn_path(sample, static_cast<double>(n));
  const double delta = 2.0 / static_cast<double>(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sklab::omega_delta(path, delta));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OmegaDelta)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

// fused scan used by the oscillation experiment: no materialised path
static void BM_OscillationScan(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto sample = random_sample(n, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sklab::gn_oscillation(sample, static_cast<double>(n)));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OscillationScan)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_SequenceGeneration(benchmark::State& state) {
  const auto model = sklab::MovingMaximaModel::mm11(0.5);
  std::vector<double> out(static_cast<std::size_t>(state.range(0)));
  sklab::Philox rng(3, 0);
  for (auto _ : state) {
    sklab::moving_maxima_sequence(rng, model, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SequenceGeneration)->RangeMultiplier(8)->Range(1024, 1 << 20)->Complexity();

static void BM_LimitSeries(benchmark::State& state) {
  const auto spec = sklab::limit_spec_mm11(0.5);
  const std::size_t truncation = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 5;
  for (auto _ : state) {
    auto draws = sklab::simulate_limit_joint(spec, {0.5, 1.0}, truncation, 64, seed++);
    benchmark::DoNotOptimize(draws.v.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LimitSeries)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

BENCHMARK_MAIN();
