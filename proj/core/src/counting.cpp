#include "hdl/counting.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "hdl/errors.hpp"
#include "hdl/lag_weights.hpp"
#include "hdl/lattice_form.hpp"
#include "hdl/numeric.hpp"
#include "hdl/parallel.hpp"
#include "hdl/rng.hpp"
#include "hdl/sphere.hpp"

namespace hdl {
namespace {

CircleQuadrature quadrature_of(const CountingParams& p) {
  return {p.quadrature_nodes, p.phase, p.lambda};
}

// Randomized rounding of y/h to an integer lag: floor plus a Bernoulli step
// per axis. The lag distribution is the tent T_k(y), so averaging
// G(k) over it reproduces the exact lattice form without bias.
Lag round_lag(Vec2 y, double h, CounterRng& rng) {
  const double u = y.x / h, v = y.y / h;
  const double fu = std::floor(u), fv = std::floor(v);
  Lag k{static_cast<long long>(fu), static_cast<long long>(fv)};
  if (rng.uniform() < u - fu) ++k[0];
  if (rng.uniform() < v - fv) ++k[1];
  return k;
}

CountingReport monte_carlo(const PlanarGrid& f, const CountingParams& p, bool smooth) {
  const double h = f.resolution();
  const double n2 = static_cast<double>(f.node_count() * f.node_count());
  const double cost = static_cast<double>(p.mc_samples) * n2 * static_cast<double>(1 << p.n);
  if (cost > p.budget) {
    std::ostringstream msg;
    msg << "Monte Carlo counting needs about " << cost << " operations, budget is " << p.budget;
    throw BudgetExceeded(msg.str(), cost, p.budget);
  }
  const CircleQuadrature q = quadrature_of(p);
  // sigma_lambda * g_t is the law of lambda*omega + Z with Z of density g_t,
  // i.e. independent normal coordinates of variance t^2 / (2 pi).
  const double sd = p.epsilon * p.lambda / std::sqrt(2.0 * kPi);
  std::vector<double> samples(p.mc_samples);
  parallel_for(p.mc_samples, [&](std::size_t s) {
    CounterRng rng(*p.seed, s);
    std::vector<Lag> lags(static_cast<std::size_t>(p.n));
    for (auto& k : lags) {
      Vec2 y = q.node(rng.below(q.node_count));
      if (smooth) {
        y.x += sd * rng.normal();
        y.y += sd * rng.normal();
      }
      k = round_lag(y, h, rng);
    }
    samples[s] = lattice_product_sum(f, lags);
  });
  const double mean = pairwise_sum(samples) / static_cast<double>(samples.size());
  std::vector<double> dev(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) dev[s] = (samples[s] - mean) * (samples[s] - mean);
  const double var = samples.size() > 1 ? pairwise_sum(dev) / static_cast<double>(samples.size() - 1) : 0.0;
  CountingReport r;
  r.value = mean;
  r.stderr_estimate = std::sqrt(var / static_cast<double>(samples.size()));
  r.params = p;
  r.form = smooth ? "smooth" : "sharp";
  return r;
}

CountingReport exact(const PlanarGrid& f, const CountingParams& p, bool smooth) {
  SlotMeasure slot{smooth ? SlotKind::sphere_gauss : SlotKind::sphere_sharp, quadrature_of(p),
                   p.epsilon * p.lambda};
  const LagBox w = lag_weights(slot, f.resolution(), lag_window_for(f));
  FormConfig cfg;
  cfg.slots.assign(static_cast<std::size_t>(p.n), &w);
  EngineOptions opt;
  opt.budget = p.budget;
  CountingReport r;
  r.value = std::max(0.0, evaluate_forms(f, {cfg}, opt).front());
  r.params = p;
  r.form = smooth ? "smooth" : "sharp";
  return r;
}

}  // namespace

std::string to_string(Estimator e) {
  return e == Estimator::exact_quadrature ? "exact_quadrature" : "monte_carlo";
}

Estimator estimator_from_string(const std::string& name) {
  if (name == "exact_quadrature") return Estimator::exact_quadrature;
  if (name == "monte_carlo") return Estimator::monte_carlo;
  throw InvalidArgument("estimator must be \"exact_quadrature\" or \"monte_carlo\"");
}

void validate(const CountingParams& p) {
  if (p.n < 1 || p.n > 3) throw InvalidArgument("n must satisfy 1 <= n <= 3");
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) throw InvalidArgument("lambda must be > 0");
  if (!(p.epsilon > 0.0) || p.epsilon > 1.0) throw InvalidArgument("epsilon must satisfy 0 < epsilon <= 1");
  if (p.quadrature_nodes < 1) throw InvalidArgument("quadrature_nodes must be >= 1");
  if (p.estimator == Estimator::monte_carlo) {
    if (!p.seed) throw InvalidArgument("monte_carlo estimator requires a seed");
    if (p.mc_samples < 2) throw InvalidArgument("mc_samples must be >= 2");
  }
  if (!(p.budget > 0.0)) throw InvalidArgument("budget must be > 0");
}

double eval_F(const PlanarGrid& f, Vec2 x, std::span<const Vec2> y) {
  if (y.empty()) throw InvalidArgument("eval_F: need at least one edge vector");
  const std::size_t count = std::size_t{1} << y.size();
  double prod = 1.0;
  for (std::size_t r = 0; r < count; ++r) {
    Vec2 v = x;
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (r >> k & 1u) v += y[k];
    }
    prod *= sample_bilinear(f, v);
  }
  return prod;
}

double eval_F_recursive(const PlanarGrid& f, Vec2 x, std::span<const Vec2> y) {
  if (y.empty()) throw InvalidArgument("eval_F: need at least one edge vector");
  if (y.size() == 1) return sample_bilinear(f, x) * sample_bilinear(f, x + y[0]);
  const auto head = y.first(y.size() - 1);
  return eval_F_recursive(f, x, head) * eval_F_recursive(f, x + y.back(), head);
}

CountingReport counting_sharp(const PlanarGrid& f, const CountingParams& p) {
  validate(p);
  return p.estimator == Estimator::monte_carlo ? monte_carlo(f, p, false) : exact(f, p, false);
}

CountingReport counting_smooth(const PlanarGrid& f, const CountingParams& p) {
  validate(p);
  return p.estimator == Estimator::monte_carlo ? monte_carlo(f, p, true) : exact(f, p, true);
}

double degenerate_mass(const PlanarGrid& /*f*/, const CountingParams& p, double tol) {
  validate(p);
  if (tol < 0.0) throw InvalidArgument("degenerate_mass: tol must be >= 0");
  const CircleQuadrature q = quadrature_of(p);
  const std::vector<Vec2> nodes = q.nodes();
  const auto n = static_cast<std::size_t>(p.n);
  const double eff = std::max(tol, 1e-12 * p.lambda);

  // Each slot is in S (coefficient +1), T (-1) or neither (0).
  std::vector<std::vector<int>> patterns;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 1; code < total; ++code) {
    std::vector<int> c(n);
    std::size_t v = code;
    for (std::size_t i = 0; i < n; ++i, v /= 3) c[i] = static_cast<int>(v % 3) - 1;
    // (S, T) and (T, S) describe the same hyperplane; keep one of them.
    int first = 0;
    for (int x : c) {
      if (x != 0) {
        first = x;
        break;
      }
    }
    if (first > 0) patterns.push_back(std::move(c));
  }

  const std::size_t m = nodes.size();
  std::size_t tuples = 1;
  for (std::size_t i = 1; i < n; ++i) tuples *= m;
  std::vector<std::size_t> hits(m, 0);
  parallel_for(m, [&](std::size_t j0) {
    std::vector<std::size_t> idx(n, 0);
    idx[0] = j0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < tuples; ++t) {
      std::size_t v = t;
      for (std::size_t i = 1; i < n; ++i, v /= m) idx[i] = v % m;
      for (const auto& c : patterns) {
        Vec2 s{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
          if (c[i] != 0) s += static_cast<double>(c[i]) * nodes[idx[i]];
        }
        if (norm(s) <= eff) {
          ++count;
          break;
        }
      }
    }
    hits[j0] = count;
  });
  std::size_t total_hits = 0;
  for (std::size_t c : hits) total_hits += c;
  return static_cast<double>(total_hits) / (static_cast<double>(tuples) * static_cast<double>(m));
}

nlohmann::json to_json(const CountingParams& p) {
  nlohmann::json j{{"n", p.n},
                   {"lambda", p.lambda},
                   {"epsilon", p.epsilon},
                   {"quadrature_nodes", p.quadrature_nodes},
                   {"phase", p.phase},
                   {"estimator", to_string(p.estimator)},
                   {"mc_samples", p.mc_samples},
                   {"budget", p.budget}};
  j["seed"] = p.seed ? nlohmann::json(*p.seed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const CountingReport& r) {
  return {{"form", r.form}, {"value", r.value}, {"stderr", r.stderr_estimate}, {"params", to_json(r.params)}};
}

}  // namespace hdl
