#include <benchmark/benchmark.h>

#include "heatlab/entropy.hpp"
#include "heatlab/estimates.hpp"
#include "heatlab/kernels.hpp"

using namespace heatlab;

namespace {

void BM_EvalKernelHyperbolic(benchmark::State& state) {
  const auto m = ModelSpace::hyperbolic3();
  double d = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evalKernel(m, d, 1e-3));
    d = d > 3.0 ? 0.0 : d + 0.01;
  }
}
BENCHMARK(BM_EvalKernelHyperbolic);

// Series region near the diagonal, image integral further out.
void BM_EvalKernelSphere(benchmark::State& state) {
  const auto m = ModelSpace::sphere2();
  const double t = 1e-3;
  const double d = state.range(0) * 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(evalKernel(m, d, t));
}
BENCHMARK(BM_EvalKernelSphere)->Arg(10)->Arg(60)->Arg(1500)->Arg(3100);

void BM_NashEntropy(benchmark::State& state) {
  const ModelSpace models[] = {ModelSpace::hyperbolic3(), ModelSpace::sphere2(), ModelSpace::circle()};
  const auto& m = models[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(nashEntropy(m, 1e-3).N);
  state.SetLabel(m.name());
}
BENCHMARK(BM_NashEntropy)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_EntropyDerivative(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(entropyDerivative(ModelSpace::hyperbolic3(), 1e-3));
}
BENCHMARK(BM_EntropyDerivative)->Unit(benchmark::kMillisecond);

void BM_LypQuantitySphere(benchmark::State& state) {
  const auto m = ModelSpace::sphere2();
  for (auto _ : state) benchmark::DoNotOptimize(lypQuantity(m, 2.0, 0.02));
}
BENCHMARK(BM_LypQuantitySphere);

}  // namespace

BENCHMARK_MAIN();
