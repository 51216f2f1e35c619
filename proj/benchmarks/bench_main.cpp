#include <benchmark/benchmark.h>

#include "kksampling/analysis.hpp"
#include "kksampling/special_functions.hpp"
#include "kksampling/synthesis.hpp"

using namespace kks;

namespace {

Box interval(double lo, double hi) { return Box{Vec::Constant(1, lo), Vec::Constant(1, hi)}; }

void BM_Sinc(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sinc(x));
    x += 1e-3;
  }
}
BENCHMARK(BM_Sinc);

void BM_BesselJ(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_j(1.5, x));
}
BENCHMARK(BM_BesselJ)->Arg(3)->Arg(11)->Arg(30);

void BM_Coefficient(benchmark::State& state) {
  const auto& f = corpus_function("gaussian");
  const Averager a = state.range(0) == 1 ? Averager::centered_box(1) : Averager::ball(2, 1.0);
  const auto& g = state.range(0) == 1 ? f : corpus_function("gaussian2d");
  const auto m = state.range(0) == 1 ? DilationMatrix::scalar(2.0) : DilationMatrix::quincunx();
  const LatticePoint k(static_cast<std::size_t>(a.dim()), 1);
  const QuadratureSpec q;
  for (auto _ : state) benchmark::DoNotOptimize(coefficient(g, a, m, 3, k, q));
}
BENCHMARK(BM_Coefficient)->Arg(1)->Arg(2);

void BM_QuasiProjection(benchmark::State& state) {
  const auto& f = corpus_function("gaussian");
  const EvalGrid grid(interval(-4.0, 4.0), 257);
  const int j = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(quasi_projection(f, Kernel::sinc(1), Averager::centered_box(1), DilationMatrix::scalar(2.0),
                                              j, grid, TruncationPolicy{}, QuadratureSpec{}));
}
BENCHMARK(BM_QuasiProjection)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_SynthesizeKernel(benchmark::State& state) {
  const Averager a = state.range(1) == 1 ? Averager::centered_box(1) : Averager::ball(2, 1.0);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_kernel(a, n));
}
BENCHMARK(BM_SynthesizeKernel)->Args({4, 1})->Args({4, 2})->Args({6, 1});

void BM_MomentDefect(benchmark::State& state) {
  const Averager a = Averager::ball(2, 1.0);
  const Kernel k = synthesize_kernel(a, 4);
  for (auto _ : state) benchmark::DoNotOptimize(moment_defect(k, a, 4));
}
BENCHMARK(BM_MomentDefect);

}  // namespace

BENCHMARK_MAIN();
