#include <benchmark/benchmark.h>

#include "hdl/counting.hpp"
#include "hdl/decomposition.hpp"
#include "hdl/gaussian.hpp"
#include "hdl/gowers.hpp"
#include "hdl/grid.hpp"
#include "hdl/planar_set.hpp"

using namespace hdl;

namespace {

PlanarGrid disk(std::size_t nodes) {
  return make_indicator({Disk{{4.0, 4.0}, 2.0}}, 8.0, 8.0 / static_cast<double>(nodes), BoundaryMode::zero_extended);
}

void BM_Convolve(benchmark::State& state) {
  const auto a = random_mask(8.0, state.range(0), 0.5, 1);
  const auto b = random_mask(8.0, state.range(0), 0.5, 2);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(a, b));
}
BENCHMARK(BM_Convolve)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ConvIdentity(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_conv_hh(1.0, 2.0, 16.0, 1.0 / 32));
}
BENCHMARK(BM_ConvIdentity)->Unit(benchmark::kMillisecond);

void BM_GowersU2(benchmark::State& state) {
  const auto f = random_mask(1.0, state.range(0), 0.5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(gowers_norm(f, 2));
}
BENCHMARK(BM_GowersU2)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CountingSharp(benchmark::State& state) {
  const auto f = disk(state.range(1));
  CountingParams p;
  p.n = static_cast<int>(state.range(0));
  p.lambda = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(counting_sharp(f, p).value);
}
BENCHMARK(BM_CountingSharp)->Args({1, 256})->Args({2, 64})->Unit(benchmark::kMillisecond);

void BM_CountingSmooth(benchmark::State& state) {
  const auto f = disk(128);
  CountingParams p;
  p.lambda = 1.0;
  p.epsilon = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(counting_smooth(f, p).value);
}
BENCHMARK(BM_CountingSmooth)->Unit(benchmark::kMillisecond);

void BM_Telescoping(benchmark::State& state) {
  const auto f = disk(128);
  FormSettings s;
  s.lambda = 1.5;
  for (auto _ : state) benchmark::DoNotOptimize(telescoping(f, 0.25, 1.0, s).l_sum);
}
BENCHMARK(BM_Telescoping)->Unit(benchmark::kMillisecond);

void BM_Theta(benchmark::State& state) {
  const auto f = disk(128);
  for (auto _ : state) benchmark::DoNotOptimize(theta_forms(f, {1.0}).theta_sum);
}
BENCHMARK(BM_Theta)->Unit(benchmark::kMillisecond);

}  // namespace
