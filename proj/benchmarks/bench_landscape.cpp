#include <benchmark/benchmark.h>

#include "mcland/landscape.hpp"
#include "mcland/optimizer.hpp"
#include "mcland/rng.hpp"

namespace {

mcland::McInstance er_instance(int n, int r) {
  const auto g = mcland::build_erdos_renyi(n / r, 0.3, {0}, 1);
  return mcland::assemble_instance(mcland::build_random_ground_truth(n, r, 2), mcland::induce_measurement_set(g, n, r),
                                   g);
}

void BM_ObjectiveGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  const auto inst = er_instance(n, r);
  const mcland::Landscape land(inst);
  mcland::Rng rng(3);
  const Eigen::MatrixXd x = rng.gaussian_matrix(n, r);
  for (auto _ : state) {
    benchmark::DoNotOptimize(land.objective(x));
    benchmark::DoNotOptimize(land.gradient(x));
  }
  state.counters["omega"] = static_cast<double>(inst.omega().size());
}
BENCHMARK(BM_ObjectiveGradient)->Args({20, 1})->Args({60, 1})->Args({60, 3})->Args({200, 2});

void BM_DenseHessianEigen(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = er_instance(n, 2);
  mcland::Rng rng(4);
  const mcland::FactorMatrix x(rng.gaussian_matrix(n, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mcland::min_hessian_eigen(inst, mcland::LossSpec::l2(), x, mcland::Subspace::LowerTriangularTangent).value);
  }
}
BENCHMARK(BM_DenseHessianEigen)->Arg(8)->Arg(20)->Arg(60);

void BM_GradientDescentRun(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = er_instance(n, 1);
  const mcland::Landscape land(inst);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto x0 = mcland::sample_radial_init(mcland::InitDistribution::gaussian(1.0), n, 1, seed++);
    benchmark::DoNotOptimize(mcland::gradient_descent(land, x0.matrix(), {}).iterations);
  }
}
BENCHMARK(BM_GradientDescentRun)->Arg(6)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
