#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "hdl/grid.hpp"
#include "hdl/vec2.hpp"

namespace hdl {

enum class Estimator { exact_quadrature, monte_carlo };

std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& name);

struct CountingParams {
  int n = 1;                          // hypercube dimension, 1..3
  double lambda = 1.0;                // edge length
  double epsilon = 1.0;               // relative smoothing scale, (0, 1]
  std::size_t quadrature_nodes = 256;  // M
  double phase = 0.0;                 // quadrature phase
  Estimator estimator = Estimator::exact_quadrature;
  std::size_t mc_samples = 100000;
  std::optional<std::uint64_t> seed;  // required for Monte Carlo
  double budget = 2e12;               // estimated floating point operations
};

/// Throws InvalidArgument naming the violated constraint.
void validate(const CountingParams& p);

struct CountingReport {
  double value = 0.0;
  double stderr_estimate = 0.0;  // 0 for the exact estimator
  CountingParams params;
  std::string form;  // "sharp" or "smooth"
};

/// Product of the bilinearly interpolated f over the 2^n vertices
/// x + sum_k r_k y_k.
double eval_F(const PlanarGrid& f, Vec2 x, std::span<const Vec2> y);

/// Same value through F_n(x; y) = F_{n-1}(x; y') F_{n-1}(x + y_n; y').
double eval_F_recursive(const PlanarGrid& f, Vec2 x, std::span<const Vec2> y);

/// Sharp counting form: y_k averaged over the circle quadrature of radius
/// lambda. The x-integral is exact on the grid.
CountingReport counting_sharp(const PlanarGrid& f, const CountingParams& p);

/// Smoothed form: y_k against sigma_lambda * g_{eps lambda}.
CountingReport counting_smooth(const PlanarGrid& f, const CountingParams& p);

/// Fraction of quadrature tuples (omega_{j_1}, ..., omega_{j_n}) whose
/// y-tuple lies within tol of some hyperplane sum_S y = sum_T y (S, T
/// disjoint, not both empty). Coincidences are detected with a floor of
/// 1e-12 lambda on tol so that exact ties survive rounding of the nodes.
double degenerate_mass(const PlanarGrid& f, const CountingParams& p, double tol);

nlohmann::json to_json(const CountingParams& p);
nlohmann::json to_json(const CountingReport& r);

}  // namespace hdl
