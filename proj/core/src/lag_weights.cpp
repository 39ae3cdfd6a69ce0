#include "hdl/lag_weights.hpp"

#include <algorithm>
#include <cmath>

#include "hdl/errors.hpp"
#include "hdl/numeric.hpp"

namespace hdl {
namespace {

// Weights beyond reach * t + 2h from a node are below 1e-20 of the peak.
constexpr double kReach = 4.0;
// Above this ratio t/h the second differences lose digits; use the Taylor
// expansion of the tent average instead.
constexpr double kSeriesRatio = 200.0;

// d^m/dz^m e^{-pi z^2} divided by e^{-pi z^2}, for m = 0, 2, 4, 6.
double gauss_poly(int m, double z) {
  const double p = kPi;
  const double z2 = z * z;
  switch (m) {
    case 0: return 1.0;
    case 2: return 4 * p * p * z2 - 2 * p;
    case 4: return 16 * p * p * p * p * z2 * z2 - 48 * p * p * p * z2 + 12 * p * p;
    case 6:
      return 64 * std::pow(p, 6) * z2 * z2 * z2 - 480 * std::pow(p, 5) * z2 * z2 +
             720 * std::pow(p, 4) * z2 - 120 * p * p * p;
    default: return 0.0;
  }
}

// phi_t^{(m)}(u)
double phi_derivative(int m, double u, double t) {
  const double z = u / t;
  return std::pow(t, -1 - m) * gauss_poly(m, z) * std::exp(-kPi * z * z);
}

// Second antiderivative of phi_t.
double psi(double x, double t) {
  return x * 0.5 * std::erf(std::sqrt(kPi) * x / t) + t / (2.0 * kPi) * std::exp(-kPi * x * x / (t * t));
}

struct Span1D {
  long long k0 = 0;
  std::vector<double> value;
  std::vector<double> dd;  // only for Laplacian slots
};

Span1D tent_span(double c, double t, double h, bool with_dd, const LagWindow& window) {
  const double reach = kReach * t + 2.0 * h;
  Span1D s;
  s.k0 = static_cast<long long>(std::ceil((c - reach) / h));
  long long k1 = static_cast<long long>(std::floor((c + reach) / h));
  if (window.limit >= 0 && !window.fold) {
    s.k0 = std::max(s.k0, -window.limit);
    k1 = std::min(k1, window.limit);
  }
  const std::size_t len = static_cast<std::size_t>(std::max(0LL, k1 - s.k0 + 1));
  s.value.resize(len);
  if (with_dd) s.dd.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const double u = static_cast<double>(s.k0 + static_cast<long long>(i)) * h - c;
    s.value[i] = tent_gauss(u, t, h);
    if (with_dd) s.dd[i] = tent_gauss_dd(u, t, h);
  }
  if (window.fold && window.limit > 0) {
    const long long n = window.limit;
    Span1D folded;
    folded.value.assign(static_cast<std::size_t>(n), 0.0);
    if (with_dd) folded.dd.assign(static_cast<std::size_t>(n), 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      const long long k = s.k0 + static_cast<long long>(i);
      const auto r = static_cast<std::size_t>(((k % n) + n) % n);
      folded.value[r] += s.value[i];
      if (with_dd) folded.dd[r] += s.dd[i];
    }
    return folded;
  }
  return s;
}

void ensure(LagBox& box, long long x0, long long y0, long long x1, long long y1) {
  box.x0 = x0;
  box.y0 = y0;
  box.width = static_cast<std::size_t>(std::max(0LL, x1 - x0 + 1));
  box.height = static_cast<std::size_t>(std::max(0LL, y1 - y0 + 1));
  box.w.assign(box.width * box.height, 0.0);
}

LagBox apply_window(const LagBox& in, const LagWindow& window) {
  if (window.limit < 0) return in;
  LagBox out;
  if (window.fold) {
    const long long n = window.limit;
    ensure(out, 0, 0, n - 1, n - 1);
  } else {
    ensure(out, std::max(in.x0, -window.limit), std::max(in.y0, -window.limit),
           std::min(in.x0 + static_cast<long long>(in.width) - 1, window.limit),
           std::min(in.y0 + static_cast<long long>(in.height) - 1, window.limit));
  }
  for (std::size_t iy = 0; iy < in.height; ++iy) {
    for (std::size_t ix = 0; ix < in.width; ++ix) {
      long long kx = in.x0 + static_cast<long long>(ix);
      long long ky = in.y0 + static_cast<long long>(iy);
      if (window.fold) {
        kx = ((kx % window.limit) + window.limit) % window.limit;
        ky = ((ky % window.limit) + window.limit) % window.limit;
      } else if (std::abs(kx) > window.limit || std::abs(ky) > window.limit) {
        continue;
      }
      out.at(kx, ky) += in.w[iy * in.width + ix];
    }
  }
  return out;
}

LagBox sharp_weights(const CircleQuadrature& q, double h) {
  LagBox box;
  long long x0 = 0, y0 = 0, x1 = -1, y1 = -1;
  bool first = true;
  for (std::size_t j = 0; j < q.node_count; ++j) {
    const Vec2 c = (1.0 / h) * q.node(j);
    const auto kx = static_cast<long long>(std::floor(c.x));
    const auto ky = static_cast<long long>(std::floor(c.y));
    if (first) {
      x0 = kx, y0 = ky, x1 = kx + 1, y1 = ky + 1;
      first = false;
    }
    x0 = std::min(x0, kx), y0 = std::min(y0, ky);
    x1 = std::max(x1, kx + 1), y1 = std::max(y1, ky + 1);
  }
  ensure(box, x0, y0, x1, y1);
  const double wj = q.weight();
  for (std::size_t j = 0; j < q.node_count; ++j) {
    const Vec2 c = (1.0 / h) * q.node(j);
    const double fx = std::floor(c.x), fy = std::floor(c.y);
    const double ax = c.x - fx, ay = c.y - fy;
    const auto kx = static_cast<long long>(fx);
    const auto ky = static_cast<long long>(fy);
    box.at(kx, ky) += wj * (1 - ax) * (1 - ay);
    box.at(kx + 1, ky) += wj * ax * (1 - ay);
    box.at(kx, ky + 1) += wj * (1 - ax) * ay;
    box.at(kx + 1, ky + 1) += wj * ax * ay;
  }
  return box;
}

LagBox kernel_weights(const std::vector<Vec2>& centers, double node_weight, double t, double h,
                      bool laplace, const LagWindow& window) {
  std::vector<Span1D> sx, sy;
  sx.reserve(centers.size());
  sy.reserve(centers.size());
  long long x0 = 0, y0 = 0, x1 = -1, y1 = -1;
  bool first = true;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    sx.push_back(tent_span(centers[j].x, t, h, laplace, window));
    sy.push_back(tent_span(centers[j].y, t, h, laplace, window));
    if (sx[j].value.empty() || sy[j].value.empty()) continue;
    const long long ax1 = sx[j].k0 + static_cast<long long>(sx[j].value.size()) - 1;
    const long long ay1 = sy[j].k0 + static_cast<long long>(sy[j].value.size()) - 1;
    if (first) {
      x0 = sx[j].k0, y0 = sy[j].k0, x1 = ax1, y1 = ay1;
      first = false;
    } else {
      x0 = std::min(x0, sx[j].k0), y0 = std::min(y0, sy[j].k0);
      x1 = std::max(x1, ax1), y1 = std::max(y1, ay1);
    }
  }
  LagBox box;
  ensure(box, x0, y0, x1, y1);
  const double t2 = t * t;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const Span1D& a = sx[j];
    const Span1D& b = sy[j];
    if (a.value.empty() || b.value.empty()) continue;
    for (std::size_t iy = 0; iy < b.value.size(); ++iy) {
      double* row = &box.at(a.k0, b.k0 + static_cast<long long>(iy));
      if (laplace) {
        const double by = node_weight * t2 * b.value[iy];
        const double bdd = node_weight * t2 * b.dd[iy];
        for (std::size_t ix = 0; ix < a.value.size(); ++ix) {
          row[ix] += a.dd[ix] * by + a.value[ix] * bdd;
        }
      } else {
        const double by = node_weight * b.value[iy];
        for (std::size_t ix = 0; ix < a.value.size(); ++ix) row[ix] += a.value[ix] * by;
      }
    }
  }
  return box;
}

}  // namespace

double LagBox::operator()(long long kx, long long ky) const noexcept {
  if (kx < x0 || ky < y0 || kx >= x0 + static_cast<long long>(width) ||
      ky >= y0 + static_cast<long long>(height)) {
    return 0.0;
  }
  return w[static_cast<std::size_t>(ky - y0) * width + static_cast<std::size_t>(kx - x0)];
}

double LagBox::total() const { return pairwise_sum(w); }

double LagBox::max_abs() const {
  double m = 0.0;
  for (double v : w) m = std::max(m, std::abs(v));
  return m;
}

double tent_gauss(double u, double t, double h) {
  if (t > kSeriesRatio * h) {
    const double h2 = h * h;
    return h * (phi_derivative(0, u, t) + h2 / 12.0 * phi_derivative(2, u, t) +
                h2 * h2 / 360.0 * phi_derivative(4, u, t));
  }
  return (psi(u + h, t) - 2.0 * psi(u, t) + psi(u - h, t)) / h;
}

double tent_gauss_dd(double u, double t, double h) {
  if (t > kSeriesRatio * h) {
    const double h2 = h * h;
    return h * (phi_derivative(2, u, t) + h2 / 12.0 * phi_derivative(4, u, t) +
                h2 * h2 / 360.0 * phi_derivative(6, u, t));
  }
  return (phi_derivative(0, u + h, t) - 2.0 * phi_derivative(0, u, t) + phi_derivative(0, u - h, t)) / h;
}

LagWindow lag_window_for(const PlanarGrid& f) {
  const auto n = static_cast<long long>(f.node_count());
  if (f.boundary() == BoundaryMode::periodic) return {n, true};
  return {n - 1, false};
}

LagBox lag_weights(const SlotMeasure& slot, double resolution, const LagWindow& window) {
  if (!(resolution > 0.0)) throw InvalidArgument("lag_weights: resolution must be > 0");
  const bool on_sphere = slot.kind == SlotKind::sphere_sharp || slot.kind == SlotKind::sphere_gauss ||
                         slot.kind == SlotKind::sphere_laplace;
  if (on_sphere) validate(slot.sphere);
  if (slot.kind == SlotKind::sphere_sharp) return apply_window(sharp_weights(slot.sphere, resolution), window);
  if (!(slot.scale > 0.0)) throw InvalidArgument("lag_weights: kernel scale must be > 0");

  const bool laplace = slot.kind == SlotKind::sphere_laplace || slot.kind == SlotKind::origin_laplace;
  if (on_sphere) {
    return kernel_weights(slot.sphere.nodes(), slot.sphere.weight(), slot.scale, resolution, laplace,
                          window);
  }
  return kernel_weights({Vec2{0.0, 0.0}}, 1.0, slot.scale, resolution, laplace, window);
}

}  // namespace hdl
