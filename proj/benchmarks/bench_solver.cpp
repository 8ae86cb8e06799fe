#include <benchmark/benchmark.h>

#include "mcland/completion.hpp"

namespace {

// Propagation cost should grow like n^2 / r^2 + n r^2.
void BM_SolveByPropagation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  const auto g = mcland::build_erdos_renyi(n / r, 0.3, {0}, 5);
  const auto inst = mcland::assemble_instance(mcland::build_random_ground_truth(n, r, 6),
                                              mcland::induce_measurement_set(g, n, r), g);
  for (auto _ : state) benchmark::DoNotOptimize(mcland::solve_by_propagation(inst).operations_estimate);
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveByPropagation)
    ->ArgsProduct({{50, 100, 200, 400, 800}, {1}})
    ->Complexity(benchmark::oNSquared);
BENCHMARK(BM_SolveByPropagation)->ArgsProduct({{60, 240}, {2, 3}});

}  // namespace
