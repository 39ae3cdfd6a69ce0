#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hdl/gaussian.hpp"
#include "hdl/grid.hpp"
#include "hdl/vec2.hpp"

namespace hdl {

/// Equal-weight equispaced quadrature for the normalized arc-length measure
/// on the circle of radius `radius`: nodes radius*(cos(2 pi j/M + phase),
/// sin(2 pi j/M + phase)), weights 1/M.
struct CircleQuadrature {
  std::size_t node_count = 256;
  double phase = 0.0;
  double radius = 1.0;

  Vec2 node(std::size_t j) const noexcept;
  double weight() const noexcept { return 1.0 / static_cast<double>(node_count); }
  std::vector<Vec2> nodes() const;

  /// Same quadrature with a phase drawn uniformly from [0, 2 pi / M).
  static CircleQuadrature random_phase(std::size_t node_count, double radius, std::uint64_t seed);
};

void validate(const CircleQuadrature& q);

/// (1/M) sum_j K(x - radius*omega_j) for a closed-form kernel.
double smoothed_sphere_value(const CircleQuadrature& q, const KernelSpec& kernel, Vec2 x);

struct SmoothSphere {
  PlanarGrid grid;             // periodic lattice grid, minimum-image coordinates
  bool under_resolved = false;  // kernel scale < 2 pi radius / (4M)
};

/// Samples the smoothed sphere on a periodic lattice grid of side R centred
/// on the origin. The window must hold the circle plus six kernel scales.
SmoothSphere smooth_sphere(const CircleQuadrature& q, const KernelSpec& kernel, double side,
                           double resolution);

/// (1/M) sum_j e^{-2 pi i radius omega_j . xi}.
std::complex<double> sphere_fourier(const CircleQuadrature& q, Vec2 xi);

struct DecayProfile {
  double max_scaled = 0.0;  // max of |sigma^(rho e)| rho^{1/2}
  double argmax = 0.0;
  std::size_t node_count = 0;  // quadrature size used, >= 16 rho_max
};

/// Sweeps |xi| over [rho_min, rho_max] (samples points, direction at angle
/// `direction`) on the unit circle measure.
DecayProfile sphere_decay_profile(double rho_min, double rho_max, std::size_t samples,
                                  double direction = 0.0);

struct BallBound {
  double c_ball = 0.0;        // min of sigma * g over the closed ball of radius 2
  double argmin_radius = 0.0;
  double value_at_origin = 0.0;
};

/// Minimum of (sigma * g_1)(x) over a polar grid of B_2(0) (radial_steps
/// radii, angular_steps directions), unit radius, M nodes.
BallBound lower_bound_constant(std::size_t node_count, std::size_t radial_steps = 401,
                               std::size_t angular_steps = 64);

/// Integral over gamma in [1, inf) of g_{s gamma}(x) d gamma / gamma^2, by
/// Simpson in log(gamma) on [1, cutoff] plus the analytic tail bound.
/// `converged` reports whether `intervals` and 2*intervals agree to 1e-4.
double gamma_tail_integral(double s, Vec2 x, std::size_t intervals, bool* converged = nullptr);

enum class CheckStatus { holds, violated, inconclusive };
const char* to_string(CheckStatus s);

struct DominationResult {
  CheckStatus status = CheckStatus::holds;
  double min_margin = 0.0;  // min over samples of C eps^{-3} rhs / lhs
  double max_ratio = 0.0;   // max over samples of eps^3 lhs / rhs (the C the samples need)
  Vec2 worst_point;
  double worst_s = 0.0;
  double min_radicand = 0.0;  // min of ((t lambda)^2 - 2 s^2) / (t lambda)^2
};

struct DominationParams {
  double lambda = 1.0;
  double t = 1.0;
  double epsilon = 1.0;
  double constant = 1.0;
  std::size_t s_samples = 5;  // log-spaced over [theta t lambda, e theta t lambda]
  std::size_t gamma_intervals = 128;
  CircleQuadrature quadrature{};
};

/// Checks (sigma_lambda * g_{t lambda})(x) <= C eps^{-3} int_1^inf g_{s gamma}(x) d gamma/gamma^2
/// and the same with g_r, r = sqrt((t lambda)^2 - 2 s^2), at every sample
/// point and every sampled s.
DominationResult gaussian_domination_check(const DominationParams& p, const std::vector<Vec2>& points);

/// theta = 1/(10 e).
inline constexpr double kDominationTheta = 0.036787944117144233;

}  // namespace hdl
