#include <benchmark/benchmark.h>

#include <cmath>

#include "dwig/eigen.hpp"
#include "dwig/field.hpp"
#include "dwig/moments.hpp"
#include "dwig/presets.hpp"
#include "dwig/stieltjes.hpp"

using namespace dwig;

namespace {

void BM_Eigenvalues(benchmark::State& state) {
  EnsembleConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  const SymMatrix a = generate_field(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_eigenvalues(a));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Eigenvalues)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oNCubed)->Unit(benchmark::kMillisecond);

void BM_EigenWithVectors(benchmark::State& state) {
  EnsembleConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  const SymMatrix a = generate_field(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_eigen(a));
}
BENCHMARK(BM_EigenWithVectors)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_BetaCombinatorial(benchmark::State& state) {
  const CovKernel k = *make_preset("example1").kernel;
  for (auto _ : state) benchmark::DoNotOptimize(beta_combinatorial(k, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BetaCombinatorial)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_BetaRecursive(benchmark::State& state) {
  const CovKernel k = *make_preset("example1").kernel;
  const auto f = spectral_density(k, default_quadrature(k, 5));
  for (auto _ : state) benchmark::DoNotOptimize(beta_recursive(f, 5));
}
BENCHMARK(BM_BetaRecursive)->Unit(benchmark::kMicrosecond);

void BM_SolveH(benchmark::State& state) {
  const CovKernel k = *make_preset("example1").kernel;
  const auto f = spectral_density(k, default_quadrature(k, 5));
  const cplx z(0.5, std::pow(10.0, -static_cast<double>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(continuation_solve(f, z));
}
BENCHMARK(BM_SolveH)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_GenerateField(benchmark::State& state) {
  const auto p = make_preset("example1");
  EnsembleConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.coeffs = *p.coeffs;
  int rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_field(cfg, rep++));
}
BENCHMARK(BM_GenerateField)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
