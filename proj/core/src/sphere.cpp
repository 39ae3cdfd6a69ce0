#include "hdl/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hdl/errors.hpp"
#include "hdl/numeric.hpp"
#include "hdl/rng.hpp"

namespace hdl {

Vec2 CircleQuadrature::node(std::size_t j) const noexcept {
  const double angle = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(node_count) + phase;
  return polar(radius, angle);
}

std::vector<Vec2> CircleQuadrature::nodes() const {
  std::vector<Vec2> out(node_count);
  for (std::size_t j = 0; j < node_count; ++j) out[j] = node(j);
  return out;
}

CircleQuadrature CircleQuadrature::random_phase(std::size_t node_count, double radius,
                                                std::uint64_t seed) {
  CounterRng rng(seed, 0);
  return {node_count, rng.uniform() * 2.0 * kPi / static_cast<double>(node_count), radius};
}

void validate(const CircleQuadrature& q) {
  if (q.node_count < 1) throw InvalidArgument("circle quadrature: M must be >= 1");
  if (!(q.radius > 0.0)) throw InvalidArgument("circle quadrature: radius must be > 0");
}

double smoothed_sphere_value(const CircleQuadrature& q, const KernelSpec& kernel, Vec2 x) {
  std::vector<double> terms(q.node_count);
  for (std::size_t j = 0; j < q.node_count; ++j) terms[j] = eval_kernel(kernel, x - q.node(j));
  return pairwise_sum(terms) * q.weight();
}

SmoothSphere smooth_sphere(const CircleQuadrature& q, const KernelSpec& kernel, double side,
                           double resolution) {
  validate(q);
  const std::size_t n = PlanarGrid::node_count_for(side, resolution);
  if (side / 2.0 < q.radius + 6.0 * kernel.scale) {
    throw InvalidArgument("smooth_sphere: window must contain the circle plus six kernel scales");
  }
  SmoothSphere out{PlanarGrid(side, n, BoundaryMode::periodic, Placement::lattice), false};
  out.under_resolved = kernel.scale < 2.0 * kPi * q.radius / (4.0 * static_cast<double>(q.node_count));
  fill(out.grid, [&](Vec2 x) { return smoothed_sphere_value(q, kernel, x); });
  return out;
}

std::complex<double> sphere_fourier(const CircleQuadrature& q, Vec2 xi) {
  validate(q);
  std::vector<double> re(q.node_count), im(q.node_count);
  for (std::size_t j = 0; j < q.node_count; ++j) {
    const double arg = -2.0 * kPi * dot(q.node(j), xi);
    re[j] = std::cos(arg);
    im[j] = std::sin(arg);
  }
  return {pairwise_sum(re) * q.weight(), pairwise_sum(im) * q.weight()};
}

DecayProfile sphere_decay_profile(double rho_min, double rho_max, std::size_t samples,
                                  double direction) {
  if (!(rho_min > 0.0) || rho_max < rho_min || samples < 2) {
    throw InvalidArgument("sphere_decay_profile: need 0 < rho_min <= rho_max and >= 2 samples");
  }
  DecayProfile out;
  out.node_count = next_power_of_two(static_cast<std::size_t>(std::ceil(16.0 * rho_max)));
  const CircleQuadrature q{out.node_count, 0.0, 1.0};
  for (std::size_t i = 0; i < samples; ++i) {
    const double rho =
        rho_min + (rho_max - rho_min) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double v = std::abs(sphere_fourier(q, polar(rho, direction))) * std::sqrt(rho);
    if (v > out.max_scaled) {
      out.max_scaled = v;
      out.argmax = rho;
    }
  }
  return out;
}

BallBound lower_bound_constant(std::size_t node_count, std::size_t radial_steps,
                               std::size_t angular_steps) {
  const CircleQuadrature q{node_count, 0.0, 1.0};
  validate(q);
  const KernelSpec g1{KernelFamily::g, 1.0};
  BallBound out;
  out.value_at_origin = smoothed_sphere_value(q, g1, {0.0, 0.0});
  out.c_ball = out.value_at_origin;
  for (std::size_t r = 1; r < radial_steps; ++r) {
    const double rad = 2.0 * static_cast<double>(r) / static_cast<double>(radial_steps - 1);
    for (std::size_t a = 0; a < angular_steps; ++a) {
      const double ang = 2.0 * kPi * static_cast<double>(a) / static_cast<double>(angular_steps);
      const double v = smoothed_sphere_value(q, g1, polar(rad, ang));
      if (v < out.c_ball) {
        out.c_ball = v;
        out.argmin_radius = rad;
      }
    }
  }
  return out;
}

namespace {

constexpr double kGammaCutoff = 1e4;

double gamma_integral_once(double s, Vec2 x, std::size_t intervals) {
  const LogQuadrature quad = log_simpson(1.0, kGammaCutoff, intervals);
  std::vector<double> terms(quad.nodes.size());
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const double gamma = quad.nodes[i];
    // d gamma / gamma^2 = (1/gamma) d gamma / gamma
    terms[i] = quad.weights[i] * eval_kernel({KernelFamily::g, s * gamma}, x) / gamma;
  }
  // Beyond the cutoff g_{s gamma}(x) <= (s gamma)^{-2}; the tail is at most
  // s^{-2} / (3 cutoff^3).
  const double tail = 1.0 / (3.0 * s * s * kGammaCutoff * kGammaCutoff * kGammaCutoff);
  return pairwise_sum(terms) + tail;
}

}  // namespace

double gamma_tail_integral(double s, Vec2 x, std::size_t intervals, bool* converged) {
  if (!(s > 0.0)) throw InvalidArgument("gamma_tail_integral: s must be > 0");
  const double coarse = gamma_integral_once(s, x, intervals);
  const double fine = gamma_integral_once(s, x, 2 * intervals);
  if (converged) *converged = std::abs(fine - coarse) <= 1e-4 * std::abs(fine);
  return fine;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::holds: return "holds";
    case CheckStatus::violated: return "violated";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

DominationResult gaussian_domination_check(const DominationParams& p,
                                           const std::vector<Vec2>& points) {
  if (!(p.epsilon > 0.0) || p.epsilon > p.t || p.t > 1.0) {
    throw InvalidArgument("gaussian_domination_check: need 0 < eps <= t <= 1");
  }
  if (!(p.lambda > 0.0) || p.s_samples < 1) {
    throw InvalidArgument("gaussian_domination_check: need lambda > 0 and s samples >= 1");
  }
  CircleQuadrature q = p.quadrature;
  q.radius = p.lambda;
  validate(q);

  const double tl = p.t * p.lambda;
  const double s_lo = kDominationTheta * tl;
  const double eps3 = p.epsilon * p.epsilon * p.epsilon;

  DominationResult out;
  out.min_margin = std::numeric_limits<double>::infinity();
  out.min_radicand = std::numeric_limits<double>::infinity();
  bool all_converged = true;
  for (std::size_t k = 0; k < p.s_samples; ++k) {
    const double frac = p.s_samples == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(p.s_samples - 1);
    const double s = s_lo * std::exp(frac);
    const double radicand = tl * tl - 2.0 * s * s;
    out.min_radicand = std::min(out.min_radicand, radicand / (tl * tl));
    if (radicand <= 0.0) {
      out.status = CheckStatus::violated;
      continue;
    }
    const double r = std::sqrt(radicand);
    for (const Vec2& x : points) {
      bool converged = true;
      const double rhs = gamma_tail_integral(s, x, p.gamma_intervals, &converged);
      all_converged = all_converged && converged;
      const double lhs = std::max(smoothed_sphere_value(q, {KernelFamily::g, tl}, x),
                                  smoothed_sphere_value(q, {KernelFamily::g, r}, x));
      const double ratio = eps3 * lhs / rhs;
      if (ratio > out.max_ratio) out.max_ratio = ratio;
      const double margin = p.constant * rhs / (eps3 * lhs);
      if (margin < out.min_margin) {
        out.min_margin = margin;
        out.worst_point = x;
        out.worst_s = s;
      }
    }
  }
  if (out.status != CheckStatus::violated) {
    if (!all_converged) {
      out.status = CheckStatus::inconclusive;
    } else if (out.min_margin < 1.0) {
      out.status = CheckStatus::violated;
    }
  }
  return out;
}

}  // namespace hdl
