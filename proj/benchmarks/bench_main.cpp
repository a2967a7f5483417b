#include <benchmark/benchmark.h>

#include "omega_lab/omega_engine.hpp"
#include "omega_lab/prime_engine.hpp"
#include "omega_lab/sampler.hpp"

using namespace omega_lab;

static void BM_PrimesUpTo(benchmark::State& state) {
  const auto bound = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(primes_up_to(bound, {kDefaultSegmentSize, 1}).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PrimesUpTo)->Arg(1'000'000)->Arg(100'000'000)->Unit(benchmark::kMillisecond);

static void BM_OmegaFrequencies(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(omega_frequencies(1, n, {kDefaultSegmentSize, 1}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OmegaFrequencies)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

static void BM_TruncatedOmega(benchmark::State& state) {
  const auto table = primes_up_to(static_cast<std::uint64_t>(state.range(0)));
  const TrialDivisionPlan plan(table);
  const auto googol = BigBound::parse("1" + std::string(100, '0'));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(plan.count(sample_uniform(googol, i++, 1)));
}
BENCHMARK(BM_TruncatedOmega)->Arg(1'000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

static void BM_SampleUniform(benchmark::State& state) {
  const auto googol = BigBound::parse("1" + std::string(100, '0'));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_uniform(googol, i++, 7));
}
BENCHMARK(BM_SampleUniform);
BENCHMARK_MAIN();
