#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace hdl {

inline constexpr double kPi = std::numbers::pi;

/// Fixed-order pairwise (cascade) summation. The split points depend only on
/// the length of the input, so the result is independent of how the terms
/// were produced.
double pairwise_sum(std::span<const double> values);

/// Pairwise sum of a[i] * b[i].
double pairwise_dot(std::span<const double> a, std::span<const double> b);

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n);

/// Composite Simpson rule on a uniform grid in u = log(x) over [log a, log b]
/// for the measure dx/x. `intervals` must be even. Returns nodes and weights.
struct LogQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LogQuadrature log_simpson(double a, double b, std::size_t intervals);

}  // namespace hdl
