#include "hdl/grid.hpp"

#include <cmath>
#include <sstream>

#include "hdl/errors.hpp"
#include "hdl/fft.hpp"
#include "hdl/numeric.hpp"

namespace hdl {
namespace {

using Complex = std::complex<double>;

std::size_t wrap(long long i, std::size_t n) {
  const auto m = static_cast<long long>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

Placement combined_placement(const PlanarGrid& a, const PlanarGrid& b) {
  return a.offset() + b.offset() == 0.5 ? Placement::cell_centered : Placement::lattice;
}

// Number of index steps between the linear convolution index and the output
// index: offsets 1/2 + 1/2 put conv index m at lattice node m + 1.
long long index_shift(const PlanarGrid& a, const PlanarGrid& b) {
  return a.offset() + b.offset() == 1.0 ? 1 : 0;
}

void check_compatible(const PlanarGrid& a, const PlanarGrid& b) {
  if (a.node_count() != b.node_count() || a.side() != b.side() || a.boundary() != b.boundary()) {
    throw InvalidArgument("convolve: grids must share R, h and boundary mode");
  }
}

PlanarGrid place_result(const PlanarGrid& a, const PlanarGrid& b, std::span<const double> conv,
                        std::size_t conv_side) {
  const std::size_t n = a.node_count();
  PlanarGrid out(a.side(), n, a.boundary(), combined_placement(a, b));
  const long long shift = index_shift(a, b);
  const bool periodic = a.boundary() == BoundaryMode::periodic;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const long long ci = static_cast<long long>(i) - shift;
      const long long cj = static_cast<long long>(j) - shift;
      if (periodic) {
        out(i, j) = conv[wrap(cj, n) * conv_side + wrap(ci, n)];
      } else if (ci >= 0 && cj >= 0) {
        out(i, j) = conv[static_cast<std::size_t>(cj) * conv_side + static_cast<std::size_t>(ci)];
      }
    }
  }
  return out;
}

}  // namespace

PlanarGrid::PlanarGrid(double side, std::size_t node_count, BoundaryMode boundary,
                       Placement placement)
    : PlanarGrid(side, node_count, boundary, placement,
                 std::vector<double>(node_count * node_count, 0.0)) {}

PlanarGrid::PlanarGrid(double side, std::size_t node_count, BoundaryMode boundary,
                       Placement placement, std::vector<double> values)
    : side_(side), n_(node_count), boundary_(boundary), placement_(placement),
      values_(std::move(values)) {
  if (!(side > 0.0) || !std::isfinite(side)) throw InvalidArgument("grid: side R must be > 0");
  if (n_ < 2 || !is_power_of_two(n_)) {
    throw InvalidArgument("grid: node count must be a power of two >= 2, got " +
                          std::to_string(n_));
  }
  if (values_.size() != n_ * n_) throw InvalidArgument("grid: value count must be N*N");
}

std::size_t PlanarGrid::node_count_for(double side, double resolution) {
  if (!(side > 0.0)) throw InvalidArgument("grid: R must be > 0");
  if (!(resolution > 0.0) || resolution > side / 2.0) {
    throw InvalidArgument("grid: need 0 < h <= R/2");
  }
  const double ratio = std::round(side / resolution);
  const auto n = static_cast<std::size_t>(ratio);
  if (std::abs(ratio * resolution - side) > resolution / 2.0) {
    throw InvalidArgument("grid: |N h - R| > h/2");
  }
  if (!is_power_of_two(n)) {
    std::ostringstream msg;
    msg << "grid: R/h = " << n << " is not a power of two";
    throw InvalidArgument(msg.str());
  }
  return n;
}

double PlanarGrid::coordinate(std::size_t i) const noexcept {
  const double h = resolution();
  if (placement_ == Placement::lattice && boundary_ == BoundaryMode::periodic && i >= n_ / 2) {
    return (static_cast<double>(i) - static_cast<double>(n_)) * h;
  }
  return (static_cast<double>(i) + offset()) * h;
}

bool PlanarGrid::same_layout(const PlanarGrid& o) const noexcept {
  return n_ == o.n_ && side_ == o.side_ && boundary_ == o.boundary_ && placement_ == o.placement_;
}

long long SpectrumGrid::signed_index(std::size_t p) const noexcept {
  const auto s = static_cast<long long>(p);
  return p < node_count / 2 ? s : s - static_cast<long long>(node_count);
}

PlanarGrid make_indicator(const std::vector<Shape>& shapes, double side, double resolution,
                          BoundaryMode boundary) {
  const std::size_t n = PlanarGrid::node_count_for(side, resolution);
  const double slack = 1e-12 * side;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const Box b = bounding_box(shapes[s]);
    if (b.lo.x < -slack || b.lo.y < -slack || b.hi.x > side + slack || b.hi.y > side + slack) {
      std::ostringstream msg;
      msg << "make_indicator: shapes[" << s << "] with bounding box [" << b.lo.x << ", " << b.hi.x
          << "] x [" << b.lo.y << ", " << b.hi.y << "] leaves the window [0, " << side << "]^2";
      throw InvalidArgument(msg.str());
    }
  }
  PlanarGrid g(side, n, boundary, Placement::cell_centered);
  fill(g, [&](Vec2 p) {
    for (const auto& s : shapes) {
      if (contains(s, p)) return 1.0;
    }
    return 0.0;
  });
  return g;
}

PlanarGrid make_indicator(const ShapeSpec& spec) {
  return make_indicator(spec.shapes, spec.side, spec.resolution, spec.boundary);
}

double measure(const PlanarGrid& g) {
  const double h = g.resolution();
  return h * h * pairwise_sum(g.values());
}

PlanarGrid convolve(const PlanarGrid& a, const PlanarGrid& b) {
  check_compatible(a, b);
  const std::size_t n = a.node_count();
  const bool periodic = a.boundary() == BoundaryMode::periodic;
  const std::size_t p = periodic ? n : 2 * n;
  const std::size_t hw = fft::half_width(p);

  std::vector<double> pa(p * p, 0.0), pb(p * p, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      pa[j * p + i] = a(i, j);
      pb[j * p + i] = b(i, j);
    }
  }
  std::vector<Complex> fa(p * hw), fb(p * hw);
  fft::r2c(p, pa, fa);
  fft::r2c(p, pb, fb);
  const double h = a.resolution();
  const double scale = h * h / static_cast<double>(p * p);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k] * scale;
  fft::c2r(p, fa, pa);
  return place_result(a, b, pa, p);
}

PlanarGrid convolve_direct(const PlanarGrid& a, const PlanarGrid& b) {
  check_compatible(a, b);
  const std::size_t n = a.node_count();
  const bool periodic = a.boundary() == BoundaryMode::periodic;
  const std::size_t p = periodic ? n : 2 * n;
  const double h2 = a.resolution() * a.resolution();
  std::vector<double> conv(p * p, 0.0);
  std::vector<double> terms;
  terms.reserve(n * n);
  for (std::size_t mj = 0; mj < p; ++mj) {
    for (std::size_t mi = 0; mi < p; ++mi) {
      terms.clear();
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          long long bi = static_cast<long long>(mi) - static_cast<long long>(i);
          long long bj = static_cast<long long>(mj) - static_cast<long long>(j);
          if (periodic) {
            bi = static_cast<long long>(wrap(bi, n));
            bj = static_cast<long long>(wrap(bj, n));
          } else if (bi < 0 || bj < 0 || bi >= static_cast<long long>(n) ||
                     bj >= static_cast<long long>(n)) {
            continue;
          }
          terms.push_back(a(i, j) * b(static_cast<std::size_t>(bi), static_cast<std::size_t>(bj)));
        }
      }
      conv[mj * p + mi] = h2 * pairwise_sum(terms);
    }
  }
  return place_result(a, b, conv, p);
}

SpectrumGrid dft(const PlanarGrid& g) {
  const std::size_t n = g.node_count();
  SpectrumGrid s{g.side(), n, g.boundary(), g.placement(), {}};
  s.coefficients.assign(g.values().begin(), g.values().end());
  fft::c2c(n, s.coefficients, -1);
  const double h = g.resolution();
  const double o = g.offset();
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < n; ++p) {
      const double k = static_cast<double>(s.signed_index(p) + s.signed_index(q));
      const double phase = -2.0 * kPi * o * k / static_cast<double>(n);
      s.coefficients[q * n + p] *= h * h * std::polar(1.0, phase);
    }
  }
  return s;
}

PlanarGrid idft(const SpectrumGrid& s) {
  const std::size_t n = s.node_count;
  if (s.coefficients.size() != n * n) throw InvalidArgument("idft: coefficient count must be N*N");
  PlanarGrid g(s.side, n, s.boundary, s.placement);
  std::vector<Complex> work(s.coefficients);
  const double h = g.resolution();
  const double o = g.offset();
  const double scale = 1.0 / (h * h * static_cast<double>(n * n));
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < n; ++p) {
      const double k = static_cast<double>(s.signed_index(p) + s.signed_index(q));
      work[q * n + p] *= scale * std::polar(1.0, 2.0 * kPi * o * k / static_cast<double>(n));
    }
  }
  fft::c2c(n, work, +1);
  for (std::size_t k = 0; k < n * n; ++k) g.values()[k] = work[k].real();
  return g;
}

double value_at(const PlanarGrid& g, long long i, long long j) noexcept {
  const std::size_t n = g.node_count();
  if (g.boundary() == BoundaryMode::periodic) return g(wrap(i, n), wrap(j, n));
  const auto m = static_cast<long long>(n);
  if (i < 0 || j < 0 || i >= m || j >= m) return 0.0;
  return g(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
}

double sample_bilinear(const PlanarGrid& g, Vec2 p) {
  const double h = g.resolution();
  const double u = p.x / h - g.offset();
  const double v = p.y / h - g.offset();
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const double ax = u - fu;
  const double ay = v - fv;
  const auto i = static_cast<long long>(fu);
  const auto j = static_cast<long long>(fv);
  return (1.0 - ay) * ((1.0 - ax) * value_at(g, i, j) + ax * value_at(g, i + 1, j)) +
         ay * ((1.0 - ax) * value_at(g, i, j + 1) + ax * value_at(g, i + 1, j + 1));
}

}  // namespace hdl
