#include <benchmark/benchmark.h>

#include "hdl/counterexamples.hpp"
#include "hdl/embedding.hpp"

using namespace hdl;

namespace {

void BM_FindCopy(benchmark::State& state) {
  const auto a = PlanarSet::from_shapes({Disk{{0.0, 0.0}, 10.0}});
  const std::vector<double> lengths(state.range(0), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(find_copy(a, lengths).status);
}
BENCHMARK(BM_FindCopy)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

// Worst case: the search exhausts every base point and direction.
void BM_FindCopyNegative(benchmark::State& state) {
  const auto a = PlanarSet::from_shapes({Disk{{0.0, 0.0}, 0.05}, Disk{{1.0, 0.0}, 0.05}});
  for (auto _ : state) benchmark::DoNotOptimize(find_copy(a, {2.0}).status);
}
BENCHMARK(BM_FindCopyNegative)->Unit(benchmark::kMillisecond);

void BM_BitmapFindCopy(benchmark::State& state) {
  const auto a = PlanarSet::from_bitmap(random_mask(1.0, 256, 0.5, 4));
  for (auto _ : state) benchmark::DoNotOptimize(find_copy(a, {0.2, 0.2}).status);
}
BENCHMARK(BM_BitmapFindCopy)->Unit(benchmark::kMillisecond);

void BM_Stripes(benchmark::State& state) {
  const Rational eps(1, 100);
  for (auto _ : state) benchmark::DoNotOptimize(avoided_distance_demo(AvoidanceKind::stripes, eps, eps * 3 / 2).copy_exists);
}
BENCHMARK(BM_Stripes)->Unit(benchmark::kMillisecond);

}  // namespace
