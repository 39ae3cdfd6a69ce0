#include "hdl/counterexamples.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "hdl/errors.hpp"

namespace hdl {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(long e) {
  cpp_int r = 1;
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

Rational parse_decimal(const std::string& text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  cpp_int mantissa = 0;
  long scale = 0;
  bool digits = false, dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      digits = true;
      if (dot) ++scale;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw InvalidArgument("parse_rational: not a number: '" + text + "'");
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    std::size_t used = 0;
    try {
      exponent = std::stol(text.substr(i + 1), &used);
    } catch (const std::exception&) {
      throw InvalidArgument("parse_rational: bad exponent in '" + text + "'");
    }
    i += 1 + used;
  }
  if (i != text.size()) throw InvalidArgument("parse_rational: trailing characters in '" + text + "'");
  const long e = exponent - scale;
  Rational r = e >= 0 ? Rational(mantissa * pow10(e)) : Rational(mantissa, pow10(-e));
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw InvalidArgument("parse_rational: zero denominator in '" + text + "'");
  return num / den;
}

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("exact_rational: value is not finite");
  int exp = 0;
  const double frac = std::frexp(x, &exp);
  // frac * 2^53 is an integer.
  const auto m = static_cast<long long>(std::ldexp(frac, 53));
  exp -= 53;
  Rational r(m);
  cpp_int p = 1;
  p <<= std::abs(exp);
  return exp >= 0 ? Rational(r * p) : Rational(r / p);
}

std::vector<Interval> positive_differences(const std::vector<Interval>& set) {
  std::vector<Interval> diffs;
  for (const auto& a : set) {
    for (const auto& b : set) {
      Rational lo = b.lo - a.hi;
      const Rational hi = b.hi - a.lo;
      if (hi < 0) continue;
      if (lo < 0) lo = 0;
      diffs.push_back({lo, hi});
    }
  }
  std::sort(diffs.begin(), diffs.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> merged;
  for (auto& d : diffs) {
    if (!merged.empty() && d.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, d.hi);
    } else {
      merged.push_back(d);
    }
  }
  return merged;
}

std::string to_string(AvoidanceKind k) { return k == AvoidanceKind::banach_Z ? "banach_Z" : "stripes"; }

AvoidanceKind avoidance_kind_from_string(const std::string& name) {
  if (name == "banach_Z") return AvoidanceKind::banach_Z;
  if (name == "stripes") return AvoidanceKind::stripes;
  throw InvalidArgument("unknown counterexample kind '" + name + "' (expected banach_Z or stripes)");
}

AvoidanceResult avoided_distance_demo(AvoidanceKind kind, std::optional<Rational> epsilon, const Rational& lambda) {
  if (lambda <= 0) throw InvalidArgument("avoided_distance_demo: lambda must be positive");
  AvoidanceResult r;
  r.kind = kind;
  r.lambda = lambda;
  r.epsilon = epsilon;
  if (kind == AvoidanceKind::banach_Z) {
    if (epsilon) throw InvalidArgument("avoided_distance_demo: banach_Z takes no epsilon");
    r.window_lo = 0;
    r.window_hi = 20;
    const Rational w(1, 10);
    for (int k = 0; k <= 20; ++k) {
      r.set.push_back({std::max<Rational>(Rational(k) - w, r.window_lo), std::min<Rational>(Rational(k) + w, r.window_hi)});
    }
  } else {
    if (!epsilon) throw InvalidArgument("avoided_distance_demo: stripes needs epsilon");
    const Rational eps = *epsilon;
    if (eps <= 0 || eps > Rational(1, 3)) throw InvalidArgument("avoided_distance_demo: stripes needs 0 < epsilon <= 1/3");
    r.window_lo = 0;
    r.window_hi = 1;
    for (Rational a = 0; a <= r.window_hi; a += 3 * eps) {
      r.set.push_back({a, std::min<Rational>(a + eps, r.window_hi)});
    }
  }
  r.differences = positive_differences(r.set);
  r.copy_exists = std::any_of(r.differences.begin(), r.differences.end(),
                              [&](const Interval& d) { return d.lo <= lambda && lambda <= d.hi; });
  if (r.copy_exists) {
    for (const auto& a : r.set) {
      for (const auto& b : r.set) {
        if (b.lo - a.hi <= lambda && lambda <= b.hi - a.lo) {
          const Rational x = std::max<Rational>(a.lo, b.lo - lambda);
          r.witness = std::make_pair(x, Rational(x + lambda));
          return r;
        }
      }
    }
  }
  return r;
}

nlohmann::json to_json(const AvoidanceResult& r) {
  const auto str = [](const Rational& q) { return q.str(); };
  nlohmann::json j;
  j["kind"] = to_string(r.kind);
  j["epsilon"] = r.epsilon ? nlohmann::json(str(*r.epsilon)) : nlohmann::json(nullptr);
  j["lambda"] = str(r.lambda);
  j["window"] = {str(r.window_lo), str(r.window_hi)};
  j["copy_exists"] = r.copy_exists;
  j["witness"] = r.witness ? nlohmann::json::array({str(r.witness->first), str(r.witness->second)}) : nlohmann::json(nullptr);
  j["set_intervals"] = r.set.size();
  j["differences"] = nlohmann::json::array();
  for (const auto& d : r.differences) j["differences"].push_back({str(d.lo), str(d.hi)});
  return j;
}

}  // namespace hdl
