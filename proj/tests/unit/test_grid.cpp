#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "hdl/errors.hpp"
#include "hdl/grid.hpp"
#include "hdl/rng.hpp"

using namespace hdl;

namespace {

PlanarGrid random_grid(double side, std::size_t n, BoundaryMode b, std::uint64_t seed,
                       Placement p = Placement::cell_centered) {
  PlanarGrid g(side, n, b, p);
  for (std::size_t k = 0; k < g.values().size(); ++k) {
    CounterRng rng(seed, k);
    g.values()[k] = rng.uniform();
  }
  return g;
}

}  // namespace

TEST(Grid, NodeCountNeedsPowerOfTwo) {
  EXPECT_EQ(PlanarGrid::node_count_for(8.0, 0.125), 64u);
  EXPECT_THROW(PlanarGrid::node_count_for(8.0, 0.3), InvalidArgument);
}

TEST(Grid, CellAlignedRectangleHasExactMeasure) {
  const auto g = make_indicator({Rect{{1.0, 2.0}, {3.5, 4.0}}}, 8.0, 0.25, BoundaryMode::zero_extended);
  EXPECT_DOUBLE_EQ(measure(g), 2.5 * 2.0);
}

TEST(Grid, DiskMeasureConvergesToPiR2) {
  const auto g = make_indicator({Disk{{4.0, 4.0}, 2.0}}, 8.0, 1.0 / 64, BoundaryMode::zero_extended);
  EXPECT_NEAR(measure(g), kPi * 4.0, 0.01 * kPi * 4.0);
}

TEST(Grid, OutOfWindowShapeIsRejected) {
  EXPECT_THROW(make_indicator({Disk{{9.0, 4.0}, 2.0}}, 8.0, 0.25, BoundaryMode::zero_extended), InvalidArgument);
}

TEST(Grid, FftConvolutionMatchesDirectSum) {
  for (BoundaryMode b : {BoundaryMode::zero_extended, BoundaryMode::periodic}) {
    const auto a = random_grid(2.0, 16, b, 11);
    const auto c = random_grid(2.0, 16, b, 12);
    const auto fast = convolve(a, c);
    const auto slow = convolve_direct(a, c);
    ASSERT_TRUE(fast.same_layout(slow));
    for (std::size_t k = 0; k < fast.values().size(); ++k) EXPECT_NEAR(fast.values()[k], slow.values()[k], 1e-12);
  }
}

TEST(Grid, ConvolutionIsCommutativeAndMultipliesMass) {
  // Zero-extended results are cropped to the window, so mass is checked on the torus.
  const auto a = random_grid(2.0, 16, BoundaryMode::periodic, 21);
  const auto c = random_grid(2.0, 16, BoundaryMode::periodic, 22);
  const auto ac = convolve(a, c), ca = convolve(c, a);
  for (std::size_t k = 0; k < ac.values().size(); ++k) EXPECT_NEAR(ac.values()[k], ca.values()[k], 1e-12);
  EXPECT_NEAR(measure(ac), measure(a) * measure(c), 1e-10);
}

TEST(Grid, ConstantOnPeriodicWindowHasSingleCoefficient) {
  PlanarGrid one(4.0, 16, BoundaryMode::periodic, Placement::lattice);
  for (auto& v : one.values()) v = 1.0;
  const SpectrumGrid s = dft(one);
  for (std::size_t q = 0; q < 16; ++q) {
    for (std::size_t p = 0; p < 16; ++p) {
      const bool zero = s.signed_index(p) == 0 && s.signed_index(q) == 0;
      EXPECT_NEAR(std::abs(s(p, q)), zero ? 16.0 : 0.0, 1e-12);
    }
  }
}

TEST(Grid, DftRoundTrip) {
  const auto a = random_grid(3.0, 32, BoundaryMode::periodic, 31);
  const auto back = idft(dft(a));
  for (std::size_t k = 0; k < a.values().size(); ++k) EXPECT_NEAR(back.values()[k], a.values()[k], 1e-12);
}

TEST(Grid, BilinearSamplingIsExactForAffineFunctions) {
  PlanarGrid g(4.0, 16, BoundaryMode::zero_extended, Placement::cell_centered);
  fill(g, [](Vec2 p) { return 2.0 * p.x - 0.5 * p.y + 1.0; });
  for (Vec2 p : {Vec2{1.1, 2.3}, Vec2{0.7, 3.1}, Vec2{2.0, 2.0}}) {
    EXPECT_NEAR(sample_bilinear(g, p), 2.0 * p.x - 0.5 * p.y + 1.0, 1e-12);
  }
  const Vec2 node = g.node(5, 7);
  EXPECT_DOUBLE_EQ(sample_bilinear(g, node), g(5, 7));
}

TEST(Grid, SaveLoadRoundTrip) {
  const auto a = random_grid(2.0, 8, BoundaryMode::periodic, 41, Placement::lattice);
  const auto path = (std::filesystem::temp_directory_path() / "hdl_grid_roundtrip.bin").string();
  save_grid(a, path);
  const auto b = load_grid(path);
  EXPECT_TRUE(a.same_layout(b));
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  std::filesystem::remove(path);
}
