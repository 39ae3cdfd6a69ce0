#include "hdl/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "hdl/errors.hpp"
#include "hdl/lag_weights.hpp"
#include "hdl/lattice_form.hpp"
#include "hdl/numeric.hpp"

namespace hdl {
namespace {

CountingParams with_epsilon(const FormSettings& s, double epsilon) {
  CountingParams p = s;
  p.epsilon = epsilon;
  return p;
}

EngineOptions engine_options(double budget) {
  EngineOptions o;
  o.budget = budget;
  return o;
}

// Weights of the finer Simpson rule restricted to every other node give the
// coarser rule on the same log-uniform grid.
std::vector<double> coarse_weights(double a, double b, std::size_t intervals) {
  std::vector<double> out(intervals + 1, 0.0);
  if (intervals % 4 != 0) return out;
  const LogQuadrature coarse = log_simpson(a, b, intervals / 2);
  for (std::size_t i = 0; i < coarse.weights.size(); ++i) out[2 * i] = coarse.weights[i];
  return out;
}

double power_integral(const PlanarGrid& f, int n) {
  std::vector<double> p(f.values().size());
  const int e = 1 << n;
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::pow(f.values()[k], e);
  const double h = f.resolution();
  return h * h * pairwise_sum(p);
}

}  // namespace

void ScaleLadder::validate(double side) const {
  if (scales.empty()) throw InvalidArgument("ladder: need at least one scale");
  if (!(scales.front() > 0.0)) throw InvalidArgument("ladder: scales must be > 0");
  for (std::size_t j = 1; j < scales.size(); ++j) {
    if (scales[j] < 2.0 * scales[j - 1]) {
      throw InvalidArgument("ladder: lambda_{j+1} >= 2 lambda_j violated at j = " + std::to_string(j));
    }
  }
  if (side > 0.0 && side < 2.0 * scales.back()) throw InvalidArgument("ladder: need R >= 2 lambda_J");
}

double structured_part(const PlanarGrid& f, const FormSettings& s) {
  return counting_smooth(f, with_epsilon(s, 1.0)).value;
}

double structured_ratio(const PlanarGrid& f, const FormSettings& s) {
  const double r2 = f.side() * f.side();
  const double density = measure(f) / r2;
  const double denom = std::pow(density, 1 << s.n) * r2;
  return denom > 0.0 ? structured_part(f, s) / denom : 0.0;
}

StructuredCheck check_structured_bound(const PlanarGrid& f, const std::vector<double>& lambdas,
                                       const FormSettings& s, double c_str) {
  StructuredCheck out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (double lambda : lambdas) {
    if (lambda > f.side()) throw InvalidArgument("check_structured_bound: need lambda <= R");
    FormSettings p = s;
    p.lambda = lambda;
    const double r = structured_ratio(f, p);
    out.lambdas.push_back(lambda);
    out.ratios.push_back(r);
    out.min_ratio = std::min(out.min_ratio, r);
  }
  out.pass = out.min_ratio >= c_str;
  return out;
}

TelescopingResult telescoping(const PlanarGrid& f, double alpha, double beta, const FormSettings& s,
                              std::size_t intervals) {
  validate(with_epsilon(s, 1.0));
  if (!(alpha > 0.0) || !(alpha < beta) || beta > 1.0) {
    throw InvalidArgument("L form: need 0 < alpha < beta <= 1");
  }
  if (intervals < 2 || intervals % 2 != 0) throw InvalidArgument("L form: intervals must be even");
  const std::size_t n = static_cast<std::size_t>(s.n);
  const LogQuadrature quad = log_simpson(alpha, beta, intervals);
  const std::vector<double> coarse = coarse_weights(alpha, beta, intervals);
  const std::size_t nodes = quad.nodes.size();
  const double h = f.resolution();
  const LagWindow window = lag_window_for(f);
  const CircleQuadrature sphere{s.quadrature_nodes, s.phase, s.lambda};

  std::vector<LagBox> gauss(nodes), laplace(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double scale = quad.nodes[i] * s.lambda;
    gauss[i] = lag_weights({SlotKind::sphere_gauss, sphere, scale}, h, window);
    laplace[i] = lag_weights({SlotKind::sphere_laplace, sphere, scale}, h, window);
  }
  std::vector<FormConfig> configs;
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t m = 0; m < n; ++m) {
      FormConfig c;
      for (std::size_t k = 0; k < n; ++k) c.slots.push_back(k == m ? &laplace[i] : &gauss[i]);
      configs.push_back(std::move(c));
    }
  }
  FormConfig at_alpha, at_beta;
  at_alpha.slots.assign(n, &gauss.front());
  at_beta.slots.assign(n, &gauss.back());
  configs.push_back(at_alpha);
  configs.push_back(at_beta);

  const std::vector<double> v = evaluate_forms(f, configs, engine_options(s.budget));
  TelescopingResult out;
  out.n_alpha = v[nodes * n];
  out.n_beta = v[nodes * n + 1];
  const double floor = 1e-12 * f.side() * f.side();
  std::vector<double> terms(nodes), coarse_terms(nodes);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < nodes; ++i) {
      terms[i] = quad.weights[i] * v[i * n + m];
      coarse_terms[i] = coarse[i] * v[i * n + m];
    }
    LFormResult l;
    l.value = -pairwise_sum(terms) / (2.0 * kPi);
    l.coarse = -pairwise_sum(coarse_terms) / (2.0 * kPi);
    l.converged = intervals % 4 != 0 || std::abs(l.value - l.coarse) <= 0.01 * std::abs(l.value) + floor;
    out.l_forms.push_back(l);
  }
  std::vector<double> ls;
  for (const auto& l : out.l_forms) ls.push_back(l.value);
  out.l_sum = pairwise_sum(ls);
  const double diff = out.n_alpha - out.n_beta;
  out.relative_error = std::abs(diff - out.l_sum) / std::max(std::abs(diff), floor);
  return out;
}

LFormResult L_form(const PlanarGrid& f, double alpha, double beta, int m, const FormSettings& s,
                   std::size_t intervals) {
  if (m < 1 || m > s.n) throw InvalidArgument("L form: need 1 <= m <= n");
  return telescoping(f, alpha, beta, s, intervals).l_forms[static_cast<std::size_t>(m - 1)];
}

ThetaResult theta_forms(const PlanarGrid& f, const std::vector<double>& gammas,
                        const ThetaWindow& window, double budget) {
  const std::size_t n = gammas.size();
  if (n < 1 || n > 3) throw InvalidArgument("theta form: need 1 to 3 scales gamma");
  for (double g : gammas) {
    if (!(g > 0.0)) throw InvalidArgument("theta form: gamma_k must be > 0");
  }
  const double h = f.resolution();
  const double s_min = window.s_min > 0.0 ? window.s_min : 1e-3 * h;
  const double s_max = window.s_max > 0.0 ? window.s_max : 1e2 * f.side();
  if (!(s_min < s_max)) throw InvalidArgument("theta form: need s_min < s_max");
  const double decades = std::log10(s_max / s_min);
  auto intervals = static_cast<std::size_t>(
      std::ceil(decades * static_cast<double>(std::max<std::size_t>(1, window.intervals_per_decade))));
  intervals += intervals % 2;
  intervals = std::max<std::size_t>(intervals, 2);
  const LogQuadrature quad = log_simpson(s_min, s_max, intervals);
  const std::size_t nodes = quad.nodes.size();
  const LagWindow lw = lag_window_for(f);

  // gauss[i * n + k], laplace[i * n + k] at scale s_i gamma_k.
  std::vector<LagBox> gauss(nodes * n), laplace(nodes * n);
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double scale = quad.nodes[i] * gammas[k];
      gauss[i * n + k] = lag_weights({SlotKind::origin_gauss, {}, scale}, h, lw);
      laplace[i * n + k] = lag_weights({SlotKind::origin_laplace, {}, scale}, h, lw);
    }
  }
  std::vector<FormConfig> configs;
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t m = 0; m < n; ++m) {
      FormConfig c;
      for (std::size_t k = 0; k < n; ++k) c.slots.push_back(k == m ? &laplace[i * n + k] : &gauss[i * n + k]);
      configs.push_back(std::move(c));
    }
  }
  const std::vector<double> v = evaluate_forms(f, configs, engine_options(budget));

  ThetaResult out;
  out.target = 2.0 * kPi * power_integral(f, static_cast<int>(n));
  std::vector<double> terms(nodes);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < nodes; ++i) terms[i] = quad.weights[i] * v[i * n + m];
    out.theta.push_back(-pairwise_sum(terms));
  }
  out.theta_sum = pairwise_sum(out.theta);
  out.min_theta = *std::min_element(out.theta.begin(), out.theta.end());
  out.relative_error = out.target > 0.0 ? std::abs(out.theta_sum - out.target) / out.target
                                        : std::abs(out.theta_sum);
  out.positive = out.min_theta >= -1e-6 * out.target;
  return out;
}

double theta_form(const PlanarGrid& f, const std::vector<double>& gammas, int m,
                  const ThetaWindow& window, double budget) {
  if (m < 1 || m > static_cast<int>(gammas.size())) throw InvalidArgument("theta form: need 1 <= m <= n");
  return theta_forms(f, gammas, window, budget).theta[static_cast<std::size_t>(m - 1)];
}

ErrorCheck check_error_bound(const PlanarGrid& f, const ScaleLadder& ladder, double epsilon,
                             const FormSettings& s, double c_err) {
  ladder.validate(f.side());
  validate(with_epsilon(s, epsilon));
  ErrorCheck out;
  std::vector<double> diffs;
  for (double lambda : ladder.scales) {
    FormSettings p = s;
    p.lambda = lambda;
    const double ne = counting_smooth(f, with_epsilon(p, epsilon)).value;
    const double n1 = epsilon == 1.0 ? ne : counting_smooth(f, with_epsilon(p, 1.0)).value;
    out.lambdas.push_back(lambda);
    out.n_eps.push_back(ne);
    out.n_one.push_back(n1);
    diffs.push_back(std::abs(ne - n1));
  }
  const double r2 = f.side() * f.side();
  out.sum = pairwise_sum(diffs);
  out.normalized_sum = out.sum / r2;
  out.bound = c_err * std::pow(epsilon, -3.0 * s.n) * std::log(1.0 / epsilon) * r2;
  out.pass = out.sum <= out.bound;
  return out;
}

double uniform_part(const PlanarGrid& f, double epsilon, const FormSettings& s) {
  const CountingParams p = with_epsilon(s, epsilon);
  return std::abs(counting_sharp(f, p).value - counting_smooth(f, p).value);
}

UniformCheck check_uniform_bound(const PlanarGrid& f, const std::vector<double>& epsilons,
                                 const FormSettings& s, double c_uni) {
  UniformCheck out;
  const double r2 = f.side() * f.side();
  const CountingReport sharp = counting_sharp(f, with_epsilon(s, 1.0));
  for (double eps : epsilons) {
    const CountingReport smooth = counting_smooth(f, with_epsilon(s, eps));
    const double diff = std::abs(sharp.value - smooth.value);
    const double se = std::hypot(sharp.stderr_estimate, smooth.stderr_estimate);
    if (se > 0.1 * diff) out.inconclusive = out.inconclusive || s.estimator == Estimator::monte_carlo;
    const double ratio = diff / (std::sqrt(eps) * r2);
    out.epsilons.push_back(eps);
    out.differences.push_back(diff);
    out.ratios.push_back(ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }
  out.pass = out.max_ratio <= c_uni;
  return out;
}

DecompositionReport decompose(const PlanarGrid& f, const ScaleLadder& ladder, double epsilon,
                              const FormSettings& s, const DecompositionConstants& constants) {
  ladder.validate(f.side());
  validate(with_epsilon(s, epsilon));
  DecompositionReport r;
  r.n = s.n;
  r.epsilon = epsilon;
  r.side = f.side();
  r.constants = constants;
  const double r2 = r.side * r.side;
  r.density = measure(f) / r2;
  std::vector<double> errors;
  for (double lambda : ladder.scales) {
    FormSettings p = s;
    p.lambda = lambda;
    ScaleRow row;
    row.lambda = lambda;
    row.epsilon = epsilon;
    row.n_zero = counting_sharp(f, with_epsilon(p, epsilon)).value;
    const double n_eps = counting_smooth(f, with_epsilon(p, epsilon)).value;
    row.structured = epsilon == 1.0 ? n_eps : counting_smooth(f, with_epsilon(p, 1.0)).value;
    row.error = n_eps - row.structured;
    row.uniform = row.n_zero - n_eps;
    row.telescoped = row.structured + row.error + row.uniform;
    row.structured_lower = constants.c_str * std::pow(r.density, 1 << s.n) * r2;
    row.bound_rhs = constants.c_uni * std::sqrt(epsilon) * r2;
    const bool structured_ok = row.structured >= row.structured_lower;
    const bool uniform_ok = std::abs(row.uniform) <= row.bound_rhs;
    row.pass = structured_ok && uniform_ok;
    r.structured_pass = r.structured_pass && structured_ok;
    r.uniform_pass = r.uniform_pass && uniform_ok;
    errors.push_back(std::abs(row.error));
    r.rows.push_back(row);
  }
  r.error_sum = pairwise_sum(errors);
  r.error_bound = constants.c_err * std::pow(epsilon, -3.0 * s.n) * std::log(1.0 / epsilon) * r2;
  r.error_pass = r.error_sum <= r.error_bound;
  return r;
}

nlohmann::json to_json(const DecompositionReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"lambda", row.lambda},
                    {"epsilon", row.epsilon},
                    {"n_zero", row.n_zero},
                    {"structured", row.structured},
                    {"error", row.error},
                    {"uniform", row.uniform},
                    {"telescoping_sum", row.telescoped},
                    {"structured_lower", row.structured_lower},
                    {"bound_rhs", row.bound_rhs},
                    {"pass", row.pass}});
  }
  return {{"n", r.n},
          {"epsilon", r.epsilon},
          {"R", r.side},
          {"density", r.density},
          {"scales", rows},
          {"error_sum", r.error_sum},
          {"error_bound", r.error_bound},
          {"constants", {{"c_str", r.constants.c_str}, {"C_err", r.constants.c_err}, {"C_uni", r.constants.c_uni}}},
          {"pass", {{"structured", r.structured_pass}, {"error", r.error_pass}, {"uniform", r.uniform_pass}}}};
}

std::string to_csv(const DecompositionReport& r) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "lambda,epsilon,structured,error,uniform,bound_rhs,pass,telescoping_sum,n_zero,structured_lower\n";
  for (const auto& row : r.rows) {
    out << row.lambda << ',' << row.epsilon << ',' << row.structured << ',' << row.error << ','
        << row.uniform << ',' << row.bound_rhs << ',' << (row.pass ? "true" : "false") << ','
        << row.telescoped << ',' << row.n_zero << ',' << row.structured_lower << '\n';
  }
  return out.str();
}

}  // namespace hdl
