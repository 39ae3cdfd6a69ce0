#include "hdl/workloads.hpp"

#include "hdl/rng.hpp"

namespace hdl {

PlanarGrid random_density_set(std::uint64_t seed, std::size_t index) {
  constexpr std::size_t kCells = 64;
  CounterRng pick(seed, index << 32);
  const double density = 0.1 + 0.8 * pick.uniform();
  const std::size_t block = std::size_t{1} << pick.below(4);
  PlanarGrid g(8.0, kCells, BoundaryMode::zero_extended, Placement::cell_centered);
  const std::size_t blocks = kCells / block;
  for (std::size_t bj = 0; bj < blocks; ++bj) {
    for (std::size_t bi = 0; bi < blocks; ++bi) {
      CounterRng rng(seed, (index << 32) + 1 + bj * blocks + bi);
      if (rng.uniform() >= density) continue;
      for (std::size_t j = 0; j < block; ++j) {
        for (std::size_t i = 0; i < block; ++i) g(bi * block + i, bj * block + j) = 1.0;
      }
    }
  }
  return g;
}

CubeGrid random_cube_grid(std::uint64_t seed, std::size_t index) {
  constexpr std::size_t kCells = 32;
  CounterRng pick(seed, index << 32);
  const std::size_t width = 4 + pick.below(kCells - 3);  // 4..32 cells
  const std::size_t lo_i = pick.below(kCells - width + 1);
  const std::size_t lo_j = pick.below(kCells - width + 1);
  const double fill = 0.2 + 0.8 * pick.uniform();
  CubeGrid out{PlanarGrid(1.0, kCells, BoundaryMode::zero_extended, Placement::cell_centered), {}};
  const double h = out.grid.resolution();
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t i = 0; i < width; ++i) {
      CounterRng rng(seed, (index << 32) + 1 + j * kCells + i);
      if (rng.uniform() < fill) out.grid(lo_i + i, lo_j + j) = 1.0 - rng.uniform();
    }
  }
  out.cube = {{static_cast<double>(lo_i) * h, static_cast<double>(lo_j) * h},
              {static_cast<double>(lo_i + width) * h, static_cast<double>(lo_j + width) * h}};
  return out;
}

std::vector<Shape> annulus_set(double side, double lambda) {
  std::vector<Shape> shapes;
  for (double cy : {0.25 * side, 0.75 * side}) {
    for (double cx : {0.25 * side, 0.75 * side}) shapes.push_back(Annulus{{cx, cy}, 0.8 * lambda, 1.2 * lambda});
  }
  return shapes;
}

}  // namespace hdl
