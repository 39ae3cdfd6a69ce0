#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hdl/shapes.hpp"
#include "hdl/vec2.hpp"

namespace hdl {

/// Where the samples of a grid sit inside each cell. Density grids are
/// cell-centered, nodes at ((i+1/2)h, (j+1/2)h). Kernels and autocorrelations
/// live on the lattice, nodes at (ih, jh); in periodic mode a lattice index
/// i >= N/2 stands for the minimum-image coordinate (i-N)h.
enum class Placement { cell_centered, lattice };

/// A real function sampled on an N x N grid over [0,R]^2. Row-major with the
/// x index fastest: value(i, j) is at (x_i, y_j). N is a power of two and the
/// resolution is R/N exactly.
class PlanarGrid {
 public:
  PlanarGrid() = default;
  PlanarGrid(double side, std::size_t node_count, BoundaryMode boundary,
             Placement placement = Placement::cell_centered);
  PlanarGrid(double side, std::size_t node_count, BoundaryMode boundary, Placement placement,
             std::vector<double> values);

  /// N = round(R/h), validated: N >= 2, power of two, |Nh - R| <= h/2.
  static std::size_t node_count_for(double side, double resolution);

  double side() const noexcept { return side_; }
  double resolution() const noexcept { return side_ / static_cast<double>(n_); }
  std::size_t node_count() const noexcept { return n_; }
  BoundaryMode boundary() const noexcept { return boundary_; }
  Placement placement() const noexcept { return placement_; }
  double offset() const noexcept { return placement_ == Placement::cell_centered ? 0.5 : 0.0; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[j * n_ + i]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values_[j * n_ + i]; }

  /// Coordinate of node index i along either axis.
  double coordinate(std::size_t i) const noexcept;
  Vec2 node(std::size_t i, std::size_t j) const noexcept { return {coordinate(i), coordinate(j)}; }

  bool same_layout(const PlanarGrid& other) const noexcept;

 private:
  double side_ = 0.0;
  std::size_t n_ = 0;
  BoundaryMode boundary_ = BoundaryMode::zero_extended;
  Placement placement_ = Placement::cell_centered;
  std::vector<double> values_;
};

/// Fourier coefficients c(p, q) ~ integral of f(x) e^{-2 pi i x.xi} at
/// xi = (p, q)/R, with p, q in FFT order (index >= N/2 means index - N).
struct SpectrumGrid {
  double side = 0.0;
  std::size_t node_count = 0;
  BoundaryMode boundary = BoundaryMode::periodic;
  Placement placement = Placement::cell_centered;
  std::vector<std::complex<double>> coefficients;

  double frequency_step() const noexcept { return 1.0 / side; }
  /// Signed frequency index for storage index p.
  long long signed_index(std::size_t p) const noexcept;
  std::complex<double> operator()(std::size_t p, std::size_t q) const noexcept {
    return coefficients[q * node_count + p];
  }
};

/// 1 at nodes whose position lies in the union, 0 elsewhere.
PlanarGrid make_indicator(const std::vector<Shape>& shapes, double side, double resolution,
                          BoundaryMode boundary);
PlanarGrid make_indicator(const ShapeSpec& spec);

/// h^2 times the sum of the values.
double measure(const PlanarGrid& g);

/// h^2-scaled discrete convolution approximating the integral of a(x-y)b(y).
/// Node offsets add: two cell-centered grids give a lattice grid, a
/// cell-centered grid with a lattice grid gives a cell-centered grid. In
/// zero-extended mode the result is the linear convolution restricted to the
/// window.
PlanarGrid convolve(const PlanarGrid& a, const PlanarGrid& b);

/// Same result by the direct double sum; O(N^4), for cross-checks.
PlanarGrid convolve_direct(const PlanarGrid& a, const PlanarGrid& b);

SpectrumGrid dft(const PlanarGrid& g);
PlanarGrid idft(const SpectrumGrid& s);

/// Bilinear interpolation of the node values. Outside the window the grid
/// reads 0 in zero-extended mode and wraps in periodic mode.
double sample_bilinear(const PlanarGrid& g, Vec2 p);

/// Node value with integer index, 0 outside in zero-extended mode.
double value_at(const PlanarGrid& g, long long i, long long j) noexcept;

/// Fills a grid by evaluating fn at every node (periodic lattice grids use
/// minimum-image coordinates).
template <class Fn>
void fill(PlanarGrid& g, Fn&& fn) {
  const std::size_t n = g.node_count();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) g(i, j) = fn(g.node(i, j));
  }
}

/// Binary grid file: 32-byte header ("HDLGRID1", uint64 N, float64 R,
/// uint32 boundary, uint32 placement) then N*N little-endian float64 values.
void save_grid(const PlanarGrid& g, const std::string& path);
PlanarGrid load_grid(const std::string& path);

}  // namespace hdl
