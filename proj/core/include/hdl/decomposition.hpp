#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hdl/counting.hpp"
#include "hdl/grid.hpp"

namespace hdl {

/// Scales lambda_1 < ... < lambda_J with lambda_{j+1} >= 2 lambda_j.
struct ScaleLadder {
  std::vector<double> scales;

  /// Throws unless the doubling condition holds and, for side > 0,
  /// side >= 2 lambda_J.
  void validate(double side = 0.0) const;
};

/// Form settings shared by the decomposition routines: n, lambda, M, phase
/// and budget are read from a CountingParams; epsilon and the estimator are
/// set per call.
using FormSettings = CountingParams;

/// N^1_lambda(f): the smoothed form at epsilon = 1.
double structured_part(const PlanarGrid& f, const FormSettings& s);

/// N^1 / ((|B|/R^2)^{2^n} R^2).
double structured_ratio(const PlanarGrid& f, const FormSettings& s);

struct StructuredCheck {
  std::vector<double> lambdas;
  std::vector<double> ratios;
  double min_ratio = 0.0;
  bool pass = true;  // every ratio >= c_str
};

StructuredCheck check_structured_bound(const PlanarGrid& f, const std::vector<double>& lambdas,
                                       const FormSettings& s, double c_str);

struct LFormResult {
  double value = 0.0;
  double coarse = 0.0;  // same integral on half the t-nodes
  bool converged = true;  // |value - coarse| <= 1% of the scale of the comparison
};

struct TelescopingResult {
  double n_alpha = 0.0;
  double n_beta = 0.0;
  std::vector<LFormResult> l_forms;  // m = 1..n
  double l_sum = 0.0;
  double relative_error = 0.0;  // |(N^a - N^b) - sum L| / max(|N^a - N^b|, tiny)
};

/// L^{alpha,beta,m}_lambda for every m at once, plus N^alpha and N^beta from
/// the same weights. `intervals` is the even number of Simpson intervals in
/// log t over [alpha, beta].
TelescopingResult telescoping(const PlanarGrid& f, double alpha, double beta, const FormSettings& s,
                              std::size_t intervals = 64);

/// One L form (1 <= m <= n).
LFormResult L_form(const PlanarGrid& f, double alpha, double beta, int m, const FormSettings& s,
                   std::size_t intervals = 64);

struct ThetaResult {
  std::vector<double> theta;  // m = 1..n
  double theta_sum = 0.0;
  double target = 0.0;  // 2 pi int f^{2^n}
  double relative_error = 0.0;
  double min_theta = 0.0;
  bool positive = true;  // every theta >= -1e-6 target
};

struct ThetaWindow {
  double s_min = 0.0;  // 0 selects 1e-3 h
  double s_max = 0.0;  // 0 selects 1e2 R
  std::size_t intervals_per_decade = 16;
};

/// Truncated Theta^{n,m}_{gamma} for every m, Simpson in log s.
ThetaResult theta_forms(const PlanarGrid& f, const std::vector<double>& gammas,
                        const ThetaWindow& window = {}, double budget = 2e12);

double theta_form(const PlanarGrid& f, const std::vector<double>& gammas, int m,
                  const ThetaWindow& window = {}, double budget = 2e12);

struct ErrorCheck {
  std::vector<double> lambdas;
  std::vector<double> n_eps;
  std::vector<double> n_one;
  double sum = 0.0;             // sum_j |N^eps - N^1|
  double normalized_sum = 0.0;  // sum / R^2
  double bound = 0.0;           // C_err eps^{-3n} log(1/eps) R^2
  bool pass = true;
};

ErrorCheck check_error_bound(const PlanarGrid& f, const ScaleLadder& ladder, double epsilon,
                             const FormSettings& s, double c_err);

/// |N^0 - N^eps| with the estimator of s.
double uniform_part(const PlanarGrid& f, double epsilon, const FormSettings& s);

struct UniformCheck {
  std::vector<double> epsilons;
  std::vector<double> differences;
  std::vector<double> ratios;  // difference / (eps^{1/2} R^2)
  double max_ratio = 0.0;
  bool pass = true;
  bool inconclusive = false;  // some Monte Carlo stderr above 10% of its difference
};

UniformCheck check_uniform_bound(const PlanarGrid& f, const std::vector<double>& epsilons,
                                 const FormSettings& s, double c_uni);

struct ScaleRow {
  double lambda = 0.0;
  double epsilon = 0.0;
  double n_zero = 0.0;
  double structured = 0.0;  // N^1
  double error = 0.0;       // N^eps - N^1
  double uniform = 0.0;     // N^0 - N^eps
  double telescoped = 0.0;  // structured + error + uniform
  double structured_lower = 0.0;  // c_str (|B|/R^2)^{2^n} R^2
  double bound_rhs = 0.0;         // C_uni eps^{1/2} R^2
  bool pass = true;
};

struct DecompositionConstants {
  double c_str = 0.0;
  double c_err = 0.0;
  double c_uni = 0.0;
};

struct DecompositionReport {
  int n = 1;
  double epsilon = 1.0;
  double side = 0.0;
  double density = 0.0;  // |B| / R^2
  std::vector<ScaleRow> rows;
  double error_sum = 0.0;
  double error_bound = 0.0;
  DecompositionConstants constants;
  bool structured_pass = true;
  bool error_pass = true;
  bool uniform_pass = true;
};

DecompositionReport decompose(const PlanarGrid& f, const ScaleLadder& ladder, double epsilon,
                              const FormSettings& s, const DecompositionConstants& constants);

nlohmann::json to_json(const DecompositionReport& r);
/// Long-format CSV, one row per scale.
std::string to_csv(const DecompositionReport& r);

}  // namespace hdl
