#include <gtest/gtest.h>

#include <cmath>

#include "hdl/errors.hpp"
#include "hdl/gowers.hpp"
#include "hdl/rng.hpp"
#include "hdl/workloads.hpp"
#include "support.hpp"

using namespace hdl;

namespace {

PlanarGrid unit_square(double h) {
  return make_indicator({Rect{{0.5, 0.5}, {1.5, 1.5}}}, 2.0, h, BoundaryMode::zero_extended);
}

PlanarGrid random_grid(std::uint64_t seed) {
  PlanarGrid g(1.0, 32, BoundaryMode::zero_extended, Placement::cell_centered);
  for (std::size_t k = 0; k < g.values().size(); ++k) {
    CounterRng rng(seed, k);
    g.values()[k] = rng.uniform();
  }
  return g;
}

}  // namespace

TEST(Gowers, IndicatorNorms) {
  const auto f = unit_square(1.0 / 32);
  EXPECT_NEAR(gowers_norm(f, 1), 1.0, 1e-12);
  // Separable: per axis int (tent)^2 = 2/3 and int (2/3)(1-|h|)^3 dh = 1/3.
  EXPECT_NEAR(gowers_norm(f, 2), std::pow(4.0 / 9.0, 0.25), 0.01);
  EXPECT_NEAR(gowers_norm(f, 3), std::pow(1.0 / 9.0, 0.125), 0.01);
}

TEST(Gowers, ThreeRoutesAgree) {
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    const auto f = random_grid(seed);
    const double direct = gowers_u2_power_direct(f);
    EXPECT_NEAR(gowers_u2_power_autocorrelation(f) / direct, 1.0, 1e-6);
    EXPECT_NEAR(gowers_u2_power_fourier(f) / direct, 1.0, 1e-6);
  }
}

TEST(Gowers, NormIsHomogeneous) {
  const auto f = random_grid(7);
  PlanarGrid half = f;
  for (auto& v : half.values()) v *= 0.5;
  for (int n : {1, 2, 3}) EXPECT_NEAR(gowers_norm(half, n), 0.5 * gowers_norm(f, n), 1e-12);
}

TEST(Gowers, RejectsBadInput) {
  const auto f = unit_square(1.0 / 16);
  EXPECT_THROW(gowers_norm(f, 4), InvalidArgument);
  PlanarGrid neg = f;
  neg.values()[0] = -1.0;
  EXPECT_THROW(gowers_norm(neg, 2), InvalidArgument);
}

TEST(Gowers, CubeBoundOnIndicator) {
  const auto f = unit_square(1.0 / 32);
  const GcsBound b = gowers_cs_bound(f, {{0.5, 0.5}, {1.5, 1.5}}, 2);
  EXPECT_NEAR(b.rhs, 1.0, 1e-12);
  EXPECT_NEAR(b.lhs, std::pow(4.0 / 9.0, 0.25), 0.01);
  PlanarGrid half = f;
  for (auto& v : half.values()) v *= 0.5;
  const GcsBound hb = gowers_cs_bound(half, {{0.5, 0.5}, {1.5, 1.5}}, 2);
  EXPECT_NEAR(hb.lhs, 0.5 * b.lhs, 1e-12);
  EXPECT_NEAR(hb.rhs, 0.5 * b.rhs, 1e-12);
  EXPECT_NEAR(hb.ratio, b.ratio, 1e-12);
}

TEST(Gowers, CubeBoundRejectsLeakage) {
  const auto f = unit_square(1.0 / 32);
  EXPECT_THROW(gowers_cs_bound(f, {{0.5, 0.5}, {1.25, 1.25}}, 2), InvalidArgument);
  EXPECT_THROW(gowers_cs_bound(f, {{0.5, 0.5}, {1.5, 1.75}}, 2), InvalidArgument);
}

TEST(Gowers, CubeBoundAboveFrozenConstant) {
  const double c = test::constants().c_gcs;
  for (std::size_t i = 0; i < 20; ++i) {
    const CubeGrid g = random_cube_grid(777, i);
    EXPECT_GE(gowers_cs_bound(g.grid, g.cube, 2).ratio, c) << "grid " << i;
  }
  EXPECT_GT(gcs_theoretical_constant(2), 0.0);
}
