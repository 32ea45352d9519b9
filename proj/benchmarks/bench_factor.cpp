#include <benchmark/benchmark.h>

#include "hfactor/embed.hpp"
#include "hfactor/factor.hpp"
#include "hfactor/host.hpp"
#include "hfactor/polynomial.hpp"

namespace {

using namespace hfactor;

void BM_MatchingsComplete(benchmark::State& state) {
  const auto pattern = clique_pattern(2);
  const auto host = HostGraph::complete(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_factors(pattern, host));
}
BENCHMARK(BM_MatchingsComplete)->DenseRange(12, 24, 4);

void BM_TriangleFactorsGnp(benchmark::State& state) {
  const auto pattern = clique_pattern(3);
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto host = sample_gnp(2, n, 0.6, seed++);
    benchmark::DoNotOptimize(count_factors(pattern, host));
  }
}
BENCHMARK(BM_TriangleFactorsGnp)->Arg(9)->Arg(12)->Arg(15);

void BM_HasMatchingNearThreshold(benchmark::State& state) {
  const auto pattern = clique_pattern(2);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto host = sample_gnp(2, 20, 0.17, seed++);
    benchmark::DoNotOptimize(has_factor(pattern, host));
  }
}
BENCHMARK(BM_HasMatchingNearThreshold);

void BM_CopyDegrees(benchmark::State& state) {
  const auto pattern = cycle_pattern(4);
  const auto host = sample_gnp(2, static_cast<int>(state.range(0)), 0.3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(copy_degrees(pattern, host));
}
BENCHMARK(BM_CopyDegrees)->Arg(30)->Arg(60);

void BM_DerivativeProfile(benchmark::State& state) {
  const auto poly = CopyPolynomial::copies_through(clique_pattern(3), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(derivative_profile(poly, 0.1));
}
BENCHMARK(BM_DerivativeProfile)->Arg(30)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
