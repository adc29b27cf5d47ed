#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "isomech/isotonic.hpp"

namespace {

using namespace isomech;

std::vector<double> noisy_descending(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<double>(n - i) / static_cast<double>(n) + z(rng);
  return y;
}

void BM_Pava(benchmark::State& state) {
  const auto y = noisy_descending(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(pava_nonincreasing(y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pava)->RangeMultiplier(4)->Range(16, 1 << 16)->Complexity(benchmark::oN);

void BM_ProjectIsotonic(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ScoreVector y(noisy_descending(n, 2));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), std::mt19937_64(3));
  const Ranking ranking(order);
  for (auto _ : state) benchmark::DoNotOptimize(project_isotonic(y, ranking));
}
BENCHMARK(BM_ProjectIsotonic)->RangeMultiplier(4)->Range(16, 1 << 16);

void BM_ProjectBlock(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::size_t width = static_cast<std::size_t>(state.range(1));
  const ScoreVector y(noisy_descending(n, 4));
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % width == 0) blocks.emplace_back();
    blocks.back().push_back(i);
  }
  const BlockPartition partition(blocks);
  for (auto _ : state) benchmark::DoNotOptimize(project_block(y, partition));
}
BENCHMARK(BM_ProjectBlock)->ArgsProduct({{256, 4096, 65536}, {4, 64}});

void BM_SolvePenalized(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ScoreVector y(noisy_descending(n, 5));
  const Ranking ranking = Ranking::identity(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_penalized(y, ranking, 0.5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolvePenalized)->RangeMultiplier(4)->Range(16, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_SolvePenalizedIterative(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const ScoreVector y(noisy_descending(n, 6));
  const Ranking ranking = Ranking::identity(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_penalized_iterative(y, ranking, 0.5));
}
BENCHMARK(BM_SolvePenalizedIterative)->Arg(16)->Arg(64);

}  // namespace
