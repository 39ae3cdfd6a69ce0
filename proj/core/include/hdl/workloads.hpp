#pragma once

#include <cstdint>
#include <vector>

#include "hdl/grid.hpp"
#include "hdl/shapes.hpp"

namespace hdl {

// Seeded set families shared by calibration, tests and benchmarks. The
// calibration run and the regression suites draw from the same families with
// different seeds.

/// Indicator of a random block mask on [0, 8]^2 at h = 1/8: blocks of 1, 2, 4
/// or 8 cells are kept with a density drawn from [0.1, 0.9].
PlanarGrid random_density_set(std::uint64_t seed, std::size_t index);

/// A nonnegative grid on [0, 1]^2 (32 cells per side) supported on a random
/// aligned square, with the square.
struct CubeGrid {
  PlanarGrid grid;
  Box cube;
};
CubeGrid random_cube_grid(std::uint64_t seed, std::size_t index);

/// Four annuli of radii [0.8 lambda, 1.2 lambda] centred at the quarter
/// points of [0, side]^2.
std::vector<Shape> annulus_set(double side, double lambda);

}  // namespace hdl
