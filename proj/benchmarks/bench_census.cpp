#include <benchmark/benchmark.h>

#include "mcland/census.hpp"

namespace {

void BM_CensusExample1(benchmark::State& state) {
  const int n = 6;
  const auto g = mcland::build_named_pattern(mcland::Pattern::Example1Path, {n});
  const auto x = mcland::perturb(mcland::build_canonical_ground_truth(g, {0, 2, 4}, n, 1), 0.05, 1);
  const auto inst = mcland::assemble_instance(x, mcland::induce_measurement_set(g, n, 1), g);
  mcland::CensusConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcland::multistart_census(inst, mcland::LossSpec::l2(), state.range(0), 1, cfg).classes);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CensusExample1)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
