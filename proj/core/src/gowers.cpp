#include "hdl/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hdl/errors.hpp"
#include "hdl/fft.hpp"
#include "hdl/numeric.hpp"
#include "hdl/parallel.hpp"

namespace hdl {
namespace {

using Complex = std::complex<double>;

void check_order(int n) {
  if (n < 1 || n > 3) throw InvalidArgument("gowers_norm: n must satisfy 1 <= n <= 3");
}

double read(const PlanarGrid& f, long long i, long long j) { return value_at(f, i, j); }

// f(x) f(x + k) as a grid with the layout of f.
PlanarGrid shifted_product(const PlanarGrid& f, long long kx, long long ky) {
  PlanarGrid g(f.side(), f.node_count(), f.boundary(), f.placement());
  const auto n = static_cast<long long>(f.node_count());
  for (long long j = 0; j < n; ++j) {
    for (long long i = 0; i < n; ++i) {
      const double a = f(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (a != 0.0) g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = a * read(f, i + kx, j + ky);
    }
  }
  return g;
}

bool all_zero(const PlanarGrid& g) {
  return std::all_of(g.values().begin(), g.values().end(), [](double v) { return v == 0.0; });
}

// Lags whose shifted product can be nonzero.
std::vector<std::pair<long long, long long>> lag_range(const PlanarGrid& f) {
  const auto n = static_cast<long long>(f.node_count());
  const bool periodic = f.boundary() == BoundaryMode::periodic;
  const long long lo = periodic ? 0 : -(n - 1);
  std::vector<std::pair<long long, long long>> lags;
  for (long long ky = lo; ky < n; ++ky) {
    for (long long kx = lo; kx < n; ++kx) lags.emplace_back(kx, ky);
  }
  return lags;
}

// Raw DFT of f zero-padded to 2N (or N when periodic); returns the size.
std::size_t padded_spectrum(const PlanarGrid& f, std::vector<Complex>& spec) {
  const std::size_t n = f.node_count();
  const std::size_t p = f.boundary() == BoundaryMode::periodic ? n : 2 * n;
  std::vector<double> buf(p * p, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) buf[j * p + i] = f(i, j);
  }
  spec.resize(p * fft::half_width(p));
  fft::r2c(p, buf, spec);
  return p;
}

// Sum over the full spectrum from the half spectrum of a real input.
double full_spectrum_sum(const std::vector<double>& half, std::size_t p) {
  const std::size_t hw = fft::half_width(p);
  std::vector<double> rows(p);
  std::vector<double> cols(hw);
  for (std::size_t q = 0; q < p; ++q) {
    for (std::size_t c = 0; c < hw; ++c) {
      cols[c] = ((c == 0 || 2 * c == p) ? 1.0 : 2.0) * half[q * hw + c];
    }
    rows[q] = pairwise_sum(cols);
  }
  return pairwise_sum(rows);
}

}  // namespace

double gowers_u2_power_direct(const PlanarGrid& f) {
  const double h2 = f.resolution() * f.resolution();
  const auto lags = lag_range(f);
  std::vector<double> terms(lags.size());
  parallel_for(lags.size(), [&](std::size_t l) {
    const PlanarGrid g = shifted_product(f, lags[l].first, lags[l].second);
    const double u1 = h2 * pairwise_sum(g.values());
    terms[l] = u1 * u1;
  });
  return h2 * pairwise_sum(terms);
}

double gowers_u2_power_autocorrelation(const PlanarGrid& f) {
  std::vector<Complex> spec;
  const std::size_t p = padded_spectrum(f, spec);
  for (auto& c : spec) c = std::norm(c);
  std::vector<double> corr(p * p);
  fft::c2r(p, spec, corr);
  const double h2 = f.resolution() * f.resolution();
  const double scale = h2 / static_cast<double>(p * p);
  for (double& v : corr) v = (v * scale) * (v * scale);
  return h2 * pairwise_sum(corr);
}

double gowers_u2_power_fourier(const PlanarGrid& f) {
  std::vector<Complex> spec;
  const std::size_t p = padded_spectrum(f, spec);
  std::vector<double> quartic(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double a = std::norm(spec[k]);
    quartic[k] = a * a;
  }
  const double h = f.resolution();
  const double h6 = h * h * h * h * h * h;
  return h6 * full_spectrum_sum(quartic, p) / static_cast<double>(p * p);
}

double gowers_norm(const PlanarGrid& f, int n) {
  check_order(n);
  for (double v : f.values()) {
    if (v < 0.0) throw InvalidArgument("gowers_norm: f must be nonnegative");
  }
  const double h2 = f.resolution() * f.resolution();
  if (n == 1) return std::abs(h2 * pairwise_sum(f.values()));
  if (n == 2) return std::pow(std::max(0.0, gowers_u2_power_autocorrelation(f)), 0.25);
  const auto lags = lag_range(f);
  std::vector<double> terms(lags.size(), 0.0);
  parallel_for(lags.size(), [&](std::size_t l) {
    const PlanarGrid g = shifted_product(f, lags[l].first, lags[l].second);
    if (!all_zero(g)) terms[l] = gowers_u2_power_autocorrelation(g);
  });
  return std::pow(std::max(0.0, h2 * pairwise_sum(terms)), 0.125);
}

GcsBound gowers_cs_bound(const PlanarGrid& f, const Box& cube, int n) {
  check_order(n);
  const double side_x = cube.hi.x - cube.lo.x;
  const double side_y = cube.hi.y - cube.lo.y;
  if (!(side_x > 0.0) || std::abs(side_x - side_y) > 1e-12 * side_x) {
    throw InvalidArgument("gowers_cs_bound: Q must be a nondegenerate square");
  }
  const double slack = 1e-9 * f.resolution();
  const std::size_t nn = f.node_count();
  for (std::size_t j = 0; j < nn; ++j) {
    for (std::size_t i = 0; i < nn; ++i) {
      if (f(i, j) == 0.0) continue;
      const Vec2 p = f.node(i, j);
      if (p.x < cube.lo.x - slack || p.x > cube.hi.x + slack || p.y < cube.lo.y - slack ||
          p.y > cube.hi.y + slack) {
        throw InvalidArgument("gowers_cs_bound: f has support outside the declared cube");
      }
    }
  }
  const double area = side_x * side_y;
  GcsBound b;
  b.lhs = gowers_norm(f, n);
  b.rhs = std::pow(area, -1.0 + (n + 1.0) / std::pow(2.0, n)) * measure(f);
  b.ratio = b.rhs > 0.0 ? b.lhs / b.rhs : 0.0;
  return b;
}

double gcs_theoretical_constant(int n) {
  check_order(n);
  return std::pow(n + 1.0, -2.0 * (n + 1.0) * (1.0 - std::pow(2.0, -n)));
}

}  // namespace hdl
