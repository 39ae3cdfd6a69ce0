#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace hdl {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a decimal ("0.015", "-1e-2") or fraction ("3/200") literal.
Rational parse_rational(const std::string& text);

/// Exact value of a double (every finite double is a dyadic rational).
Rational exact_rational(double x);

struct Interval {
  Rational lo;
  Rational hi;
};

/// Closed intervals {b - a : a in I, b in J, I, J in set} intersected with
/// [0, inf), merged and sorted.
std::vector<Interval> positive_differences(const std::vector<Interval>& set);

enum class AvoidanceKind { banach_Z, stripes };
std::string to_string(AvoidanceKind k);
AvoidanceKind avoidance_kind_from_string(const std::string& name);

struct AvoidanceResult {
  AvoidanceKind kind = AvoidanceKind::banach_Z;
  std::optional<Rational> epsilon;
  Rational lambda;
  Rational window_lo;
  Rational window_hi;
  std::vector<Interval> set;          // A within the window
  std::vector<Interval> differences;  // positive part of A - A
  bool copy_exists = false;           // some a, a + lambda both in A
  std::optional<std::pair<Rational, Rational>> witness;
};

/// One-dimensional sets avoiding distances, decided exactly:
///   banach_Z: A = [-1/10, 1/10] + Z on the window [0, 20] (no epsilon);
///   stripes:  A = [0, eps] u [3 eps, 4 eps] u ... on the window [0, 1].
AvoidanceResult avoided_distance_demo(AvoidanceKind kind, std::optional<Rational> epsilon, const Rational& lambda);

nlohmann::json to_json(const AvoidanceResult& r);

}  // namespace hdl
