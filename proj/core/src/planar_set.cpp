#include "hdl/planar_set.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hdl/errors.hpp"
#include "hdl/rng.hpp"

namespace hdl {

PlanarSet PlanarSet::from_shapes(std::vector<Shape> shapes, double eta_mem) {
  if (eta_mem < 0.0) throw InvalidArgument("planar set: eta_mem must be >= 0");
  PlanarSet s;
  s.kind_ = Kind::shapes;
  s.eta_mem_ = eta_mem;
  s.shapes_ = std::move(shapes);
  return s;
}

PlanarSet PlanarSet::from_bitmap(PlanarGrid grid, double eta_mem) {
  if (eta_mem < 0.0) throw InvalidArgument("planar set: eta_mem must be >= 0");
  if (grid.placement() != Placement::cell_centered) {
    throw InvalidArgument("planar set: bitmaps must be cell-centred grids");
  }
  PlanarSet s;
  s.kind_ = Kind::bitmap;
  s.eta_mem_ = eta_mem;
  s.bitmap_ = std::move(grid);
  return s;
}

PlanarSet PlanarSet::from_intervals(std::vector<std::pair<double, double>> intervals, double eta_mem) {
  if (eta_mem < 0.0) throw InvalidArgument("planar set: eta_mem must be >= 0");
  for (const auto& [a, b] : intervals) {
    if (b < a) throw InvalidArgument("planar set: interval with b < a");
  }
  PlanarSet s;
  s.kind_ = Kind::intervals;
  s.eta_mem_ = eta_mem;
  s.intervals_ = std::move(intervals);
  std::sort(s.intervals_.begin(), s.intervals_.end());
  return s;
}

bool PlanarSet::contains(Vec2 p) const {
  switch (kind_) {
    case Kind::shapes:
      return std::any_of(shapes_.begin(), shapes_.end(),
                         [&](const Shape& s) { return hdl::contains(s, p, eta_mem_); });
    case Kind::bitmap: {
      const PlanarGrid& g = *bitmap_;
      const double h = g.resolution();
      const auto n = static_cast<long long>(g.node_count());
      const auto i0 = static_cast<long long>(std::floor((p.x - eta_mem_) / h));
      const auto i1 = static_cast<long long>(std::floor((p.x + eta_mem_) / h));
      const auto j0 = static_cast<long long>(std::floor((p.y - eta_mem_) / h));
      const auto j1 = static_cast<long long>(std::floor((p.y + eta_mem_) / h));
      for (long long j = std::max(j0, 0LL); j <= std::min(j1, n - 1); ++j) {
        for (long long i = std::max(i0, 0LL); i <= std::min(i1, n - 1); ++i) {
          if (g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) >= 0.5) return true;
        }
      }
      return false;
    }
    case Kind::intervals:
      throw InvalidArgument("planar set: one-dimensional set queried with a planar point");
  }
  return false;
}

bool PlanarSet::contains(double x) const {
  if (kind_ != Kind::intervals) throw InvalidArgument("planar set: planar set queried with a scalar");
  return std::any_of(intervals_.begin(), intervals_.end(), [&](const auto& iv) {
    return x >= iv.first - eta_mem_ && x <= iv.second + eta_mem_;
  });
}

Box PlanarSet::bounds() const {
  switch (kind_) {
    case Kind::shapes: {
      if (shapes_.empty()) return {{0, 0}, {0, 0}};
      Box b = bounding_box(shapes_.front());
      for (const auto& s : shapes_) {
        const Box c = bounding_box(s);
        b.lo = {std::min(b.lo.x, c.lo.x), std::min(b.lo.y, c.lo.y)};
        b.hi = {std::max(b.hi.x, c.hi.x), std::max(b.hi.y, c.hi.y)};
      }
      return b;
    }
    case Kind::bitmap: return {{0, 0}, {bitmap_->side(), bitmap_->side()}};
    case Kind::intervals: {
      if (intervals_.empty()) return {{0, 0}, {0, 0}};
      double lo = intervals_.front().first, hi = intervals_.front().second;
      for (const auto& [a, b] : intervals_) lo = std::min(lo, a), hi = std::max(hi, b);
      return {{lo, 0}, {hi, 0}};
    }
  }
  return {};
}

namespace {

// Next whitespace-separated header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

}  // namespace

PlanarGrid read_pgm(const std::string& path, double side) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("read_pgm: cannot open " + path);
  if (pgm_token(in) != "P5") throw InvalidArgument("read_pgm: only binary P5 files are supported");
  const long width = std::stol(pgm_token(in));
  const long height = std::stol(pgm_token(in));
  const long maxval = std::stol(pgm_token(in));
  if (width != height) throw InvalidArgument("read_pgm: image must be square");
  if (maxval < 1 || maxval > 255) throw InvalidArgument("read_pgm: maxval must be in [1, 255]");
  const auto n = static_cast<std::size_t>(width);
  PlanarGrid g(side, n, BoundaryMode::zero_extended, Placement::cell_centered);
  std::vector<unsigned char> row(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(n))) {
      throw InvalidArgument("read_pgm: truncated pixel data");
    }
    for (std::size_t i = 0; i < n; ++i) g(i, n - 1 - r) = row[i] >= 128 ? 1.0 : 0.0;
  }
  return g;
}

void write_pgm(const PlanarGrid& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("write_pgm: cannot open " + path);
  const std::size_t n = g.node_count();
  out << "P5\n" << n << ' ' << n << "\n255\n";
  std::vector<unsigned char> row(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) row[i] = g(i, n - 1 - r) >= 0.5 ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(n));
  }
}

PlanarGrid random_mask(double side, std::size_t node_count, double density, std::uint64_t seed,
                       BoundaryMode boundary) {
  if (density < 0.0 || density > 1.0) throw InvalidArgument("random_mask: density must be in [0, 1]");
  PlanarGrid g(side, node_count, boundary, Placement::cell_centered);
  for (std::size_t k = 0; k < g.values().size(); ++k) {
    CounterRng rng(seed, k);
    g.values()[k] = rng.uniform() < density ? 1.0 : 0.0;
  }
  return g;
}

std::vector<unsigned char> rasterize(const PlanarSet& a, Vec2 lo, double side, std::size_t cells) {
  std::vector<unsigned char> out(cells * cells, 0);
  const double h = side / static_cast<double>(cells);
  for (std::size_t j = 0; j < cells; ++j) {
    for (std::size_t i = 0; i < cells; ++i) {
      const Vec2 p{lo.x + (static_cast<double>(i) + 0.5) * h, lo.y + (static_cast<double>(j) + 0.5) * h};
      out[j * cells + i] = a.contains(p) ? 1 : 0;
    }
  }
  return out;
}

}  // namespace hdl
