#include <benchmark/benchmark.h>

#include <random>

#include "kwlab/biangle.hpp"
#include "kwlab/joint_spectrum.hpp"
#include "kwlab/ladder_sums.hpp"
#include "kwlab/restriction_weights.hpp"
#include "kwlab/trace.hpp"

using namespace kwlab;

static void BM_LatticeShells(benchmark::State& state) {
  const auto r_max = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(lattice_shell_counts(2, r_max));
  state.SetComplexityN(r_max);
}
BENCHMARK(BM_LatticeShells)->RangeMultiplier(4)->Range(1 << 12, 1 << 22)->Complexity();

static void BM_SharpTorusSum(benchmark::State& state) {
  const auto lambda = static_cast<double>(state.range(0));
  TorusSpectrum sp(2, 1, lambda);
  const auto ladder = LadderWindow::make(parse_exact("sqrt(1/2)"), WindowFunction::sharp(parse_exact("1/4")));
  for (auto _ : state) benchmark::DoNotOptimize(sharp_ladder_sum(sp, ladder, lambda));
}
BENCHMARK(BM_SharpTorusSum)->Arg(250)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_FuzzyTorusSum(benchmark::State& state) {
  const auto lambda = static_cast<double>(state.range(0));
  TorusSpectrum sp(2, 1, lambda);
  const auto ladder = LadderWindow::make(parse_exact("3/5"), WindowFunction::bump_square(6.0));
  for (auto _ : state) benchmark::DoNotOptimize(fuzzy_ladder_sum(sp, ladder, lambda));
}
BENCHMARK(BM_FuzzyTorusSum)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_SphereJumpEvaluator(benchmark::State& state) {
  const auto N = state.range(0);
  for (auto _ : state) {
    SphereJumpEvaluator ev(3, 1, 0.0, N);
    benchmark::DoNotOptimize(ev.weight(N / 2));
  }
}
BENCHMARK(BM_SphereJumpEvaluator)->RangeMultiplier(4)->Range(64, 4096)->Unit(benchmark::kMicrosecond);

static void BM_GreatCircleJumpS2(benchmark::State& state) {
  const auto N = state.range(0);
  LegendreCatalog cat(N);
  for (auto _ : state) benchmark::DoNotOptimize(great_circle_jump_s2(N, N / 2, cat));
}
BENCHMARK(BM_GreatCircleJumpS2)->Arg(2048);

static void BM_TraceProfile(benchmark::State& state) {
  const auto lambda = static_cast<double>(state.range(0));
  TorusSpectrum sp(2, 1, lambda);
  const auto ladder = LadderWindow::make(parse_exact("3/5"), WindowFunction::bump_square(6.0));
  const auto grid = uniform_grid(-12.0, 12.0, 1.5707963267948966 / lambda);
  for (auto _ : state) benchmark::DoNotOptimize(trace_profile(sp, ladder, lambda, grid));
}
BENCHMARK(BM_TraceProfile)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_BiangleNewton(benchmark::State& state) {
  auto model = make_biangle_model("sphere", 3, 1);
  std::mt19937_64 rng(1);
  const auto p = model->random_point(0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(newton_biangle(*model, p, 6.2, 3.0));
}
BENCHMARK(BM_BiangleNewton);

static void BM_DimensionProbe(benchmark::State& state) {
  auto model = make_biangle_model("torus", 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(component_dimension_probe(*model, 0.6, 0.0, 0.0));
}
BENCHMARK(BM_DimensionProbe)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
