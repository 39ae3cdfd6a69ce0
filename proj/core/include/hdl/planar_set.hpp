#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hdl/grid.hpp"
#include "hdl/shapes.hpp"

namespace hdl {

/// A set in the plane (a union of shapes or a thresholded bitmap) or on the
/// line (a union of closed intervals), with membership inflated by
/// `eta_mem`.
class PlanarSet {
 public:
  enum class Kind { shapes, bitmap, intervals };

  static PlanarSet from_shapes(std::vector<Shape> shapes, double eta_mem = 0.0);
  /// Members are the cells whose value is >= 0.5.
  static PlanarSet from_bitmap(PlanarGrid grid, double eta_mem = 0.0);
  static PlanarSet from_intervals(std::vector<std::pair<double, double>> intervals, double eta_mem = 0.0);

  Kind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return kind_ == Kind::intervals ? 1 : 2; }
  double eta_mem() const noexcept { return eta_mem_; }
  const std::vector<Shape>& shapes() const noexcept { return shapes_; }
  const std::optional<PlanarGrid>& bitmap() const noexcept { return bitmap_; }
  const std::vector<std::pair<double, double>>& intervals() const noexcept { return intervals_; }

  /// Planar membership. A bitmap point belongs to the cell containing it;
  /// with eta_mem > 0 any cell meeting the eta-box around p counts.
  bool contains(Vec2 p) const;
  bool contains(double x) const;

  /// Bounding box of the set (of the window for bitmaps).
  Box bounds() const;

 private:
  Kind kind_ = Kind::shapes;
  double eta_mem_ = 0.0;
  std::vector<Shape> shapes_;
  std::optional<PlanarGrid> bitmap_;
  std::vector<std::pair<double, double>> intervals_;
};

/// Reads a binary PGM (P5, maxval <= 255, square power-of-two size) as a
/// bitmap over [0, side]^2: pixels >= 128 are members, the first row of the
/// file is the top of the window.
PlanarGrid read_pgm(const std::string& path, double side);
void write_pgm(const PlanarGrid& g, const std::string& path);

/// Uniform random 0/1 mask: each cell is a member with probability `density`.
PlanarGrid random_mask(double side, std::size_t node_count, double density, std::uint64_t seed,
                       BoundaryMode boundary = BoundaryMode::zero_extended);

/// Rasterizes a planar set at cell centres on [lo, lo + side]^2.
std::vector<unsigned char> rasterize(const PlanarSet& a, Vec2 lo, double side, std::size_t cells);

}  // namespace hdl
