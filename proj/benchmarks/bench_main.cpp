#include <benchmark/benchmark.h>

#include "ruelle/models.hpp"
#include "ruelle/orbits.hpp"
#include "ruelle/resonances.hpp"
#include "ruelle/traces.hpp"
#include "ruelle/transport.hpp"

namespace {

using namespace ruelle;

void BM_TraceSumHorseshoe(benchmark::State& state) {
  const auto m = horseshoe_suspension(3.0, 0.25);
  const double t_max = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_sum(m, Complex(0.5, 1.0), t_max));
}
BENCHMARK(BM_TraceSumHorseshoe)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

void BM_TraceSumCat(benchmark::State& state) {
  const auto m = cat_suspension({2, 1, 1, 1});
  const double t_max = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_sum(m, 1.0, t_max));
}
BENCHMARK(BM_TraceSumCat)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ContinueBasic(benchmark::State& state) {
  // Deeper into the left half-plane means more recursion steps.
  const Complex z(-static_cast<double>(state.range(0)) - 0.3, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(continue_basic(z));
}
BENCHMARK(BM_ContinueBasic)->Arg(0)->Arg(4)->Arg(16);

void BM_ContinueHorseshoe(benchmark::State& state) {
  const HorseshoeParams p{3.0, 0.25};
  for (auto _ : state) benchmark::DoNotOptimize(continue_horseshoe(Complex(-1.3, 0.4), 40, p));
}
BENCHMARK(BM_ContinueHorseshoe);

void BM_LocateBasic(benchmark::State& state) {
  const auto f = continuation(basic_example());
  const Rect region{-4.5, -0.5, -3.5, 3.5};
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(locate_resonances(f, region, {n, n}));
}
BENCHMARK(BM_LocateBasic)->Arg(80)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_CatFixedPoints(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cat_fixed_points({2, 1, 1, 1}, n));
  state.SetItemsProcessed(state.iterations() * cat_fixed_point_count({2, 1, 1, 1}, n));
}
BENCHMARK(BM_CatFixedPoints)->DenseRange(8, 14, 3)->Unit(benchmark::kMillisecond);

void BM_ResolventBasic(benchmark::State& state) {
  const auto m = basic_example();
  const auto f = builtin_function(m, "bump-k1");
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_apply(m, f, 1.0, {0.0, 0.2, 0.5}));
}
BENCHMARK(BM_ResolventBasic)->Unit(benchmark::kMicrosecond);

void BM_TrappedMasks(benchmark::State& state) {
  const auto m = basic_example();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trapped_set_approx(m, n, 10.0));
}
BENCHMARK(BM_TrappedMasks)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
