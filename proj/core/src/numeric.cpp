#include "hdl/numeric.hpp"

#include <cmath>

#include "hdl/errors.hpp"

namespace hdl {
namespace {

constexpr std::size_t kLeaf = 16;

double pairwise_range(const double* v, std::size_t n) {
  if (n <= kLeaf) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_range(v, half) + pairwise_range(v + half, n - half);
}

double pairwise_dot_range(const double* a, const double* b, std::size_t n) {
  if (n <= kLeaf) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_dot_range(a, b, half) + pairwise_dot_range(a + half, b + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_range(values.data(), values.size());
}

double pairwise_dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("pairwise_dot: length mismatch");
  return pairwise_dot_range(a.data(), b.data(), a.size());
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

LogQuadrature log_simpson(double a, double b, std::size_t intervals) {
  if (!(a > 0.0) || !(b > a)) throw InvalidArgument("log_simpson: need 0 < a < b");
  if (intervals < 2 || intervals % 2 != 0) {
    throw InvalidArgument("log_simpson: interval count must be even and >= 2");
  }
  const double lo = std::log(a);
  const double step = (std::log(b) - lo) / static_cast<double>(intervals);
  LogQuadrature q;
  q.nodes.resize(intervals + 1);
  q.weights.resize(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    q.nodes[i] = std::exp(lo + step * static_cast<double>(i));
    double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    q.weights[i] = w * step / 3.0;
  }
  return q;
}

}  // namespace hdl
