#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <tuple>

#include "hdl/errors.hpp"
#include "hdl/lag_weights.hpp"
#include "hdl/lattice_form.hpp"
#include "hdl/numeric.hpp"
#include "hdl/rng.hpp"

using namespace hdl;

namespace {

PlanarGrid random_grid(std::size_t n, BoundaryMode b, std::uint64_t seed) {
  PlanarGrid g(2.0, n, b, Placement::cell_centered);
  for (std::size_t k = 0; k < g.values().size(); ++k) {
    CounterRng rng(seed, k);
    g.values()[k] = rng.uniform();
  }
  return g;
}

// Naive G(k): straight loops over x and the 2^n vertices.
double naive_product_sum(const PlanarGrid& f, const std::vector<Lag>& lags) {
  const auto n = static_cast<long long>(f.node_count());
  double sum = 0.0;
  for (long long y = 0; y < n; ++y) {
    for (long long x = 0; x < n; ++x) {
      double prod = 1.0;
      for (std::size_t r = 0; r < (std::size_t{1} << lags.size()); ++r) {
        long long px = x, py = y;
        for (std::size_t i = 0; i < lags.size(); ++i) {
          if (r >> i & 1U) px += lags[i][0], py += lags[i][1];
        }
        prod *= value_at(f, px, py);
      }
      sum += prod;
    }
  }
  return sum * f.resolution() * f.resolution();
}

double simpson(const std::function<double(double)>& fn, double a, double b, int intervals) {
  const double step = (b - a) / intervals;
  double s = fn(a) + fn(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * fn(a + i * step);
  return s * step / 3.0;
}

}  // namespace

TEST(Lattice, ProductSumMatchesNaiveLoops) {
  for (BoundaryMode b : {BoundaryMode::zero_extended, BoundaryMode::periodic}) {
    const auto f = random_grid(8, b, 5);
    for (const std::vector<Lag>& lags : {std::vector<Lag>{{1, 2}}, std::vector<Lag>{{1, -3}, {2, 0}},
                                         std::vector<Lag>{{0, 1}, {-1, 1}, {3, 2}}}) {
      EXPECT_NEAR(lattice_product_sum(f, lags), naive_product_sum(f, lags), 1e-12);
    }
  }
}

TEST(Lattice, TentGaussMatchesQuadrature) {
  for (auto [u, t, h] : {std::tuple{0.0, 1.0, 0.1}, std::tuple{0.37, 0.05, 0.1}, std::tuple{3.0, 50.0, 0.1},
                         std::tuple{-1.2, 0.5, 0.25}}) {
    const auto phi = [t = t](double v) { return std::exp(-kPi * v * v / (t * t)) / t; };
    const auto phi_dd = [t = t](double v) {
      const double a = kPi / (t * t);
      return (4.0 * a * a * v * v - 2.0 * a) * std::exp(-a * v * v) / t;
    };
    const auto tent = [h = h](double v) { return std::max(0.0, 1.0 - std::abs(v) / h); };
    const double ref = simpson([&](double v) { return tent(v) * phi(u + v); }, -h, 0.0, 2000) +
                       simpson([&](double v) { return tent(v) * phi(u + v); }, 0.0, h, 2000);
    const double ref_dd = simpson([&](double v) { return tent(v) * phi_dd(u + v); }, -h, 0.0, 2000) +
                          simpson([&](double v) { return tent(v) * phi_dd(u + v); }, 0.0, h, 2000);
    EXPECT_NEAR(tent_gauss(u, t, h), ref, 1e-9 * std::max(1.0, std::abs(ref)));
    EXPECT_NEAR(tent_gauss_dd(u, t, h), ref_dd, 1e-7 * std::max(1.0, std::abs(ref_dd)));
  }
}

TEST(Lattice, WeightTotals) {
  const CircleQuadrature q{64, 0.0, 0.7};
  const double h = 1.0 / 16;
  EXPECT_NEAR(lag_weights({SlotKind::sphere_sharp, q, 0.0}, h).total(), 1.0, 1e-13);
  EXPECT_NEAR(lag_weights({SlotKind::sphere_gauss, q, 0.2}, h).total(), 1.0, 1e-10);
  EXPECT_NEAR(lag_weights({SlotKind::origin_gauss, q, 0.01}, h).total(), 1.0, 1e-10);
  EXPECT_NEAR(lag_weights({SlotKind::sphere_laplace, q, 0.2}, h).total(), 0.0, 1e-8);
  EXPECT_NEAR(lag_weights({SlotKind::origin_laplace, q, 0.5}, h).total(), 0.0, 1e-8);
}

TEST(Lattice, FoldedWeightsKeepTheirTotal) {
  const CircleQuadrature q{64, 0.0, 0.7};
  const LagBox w = lag_weights({SlotKind::origin_gauss, q, 30.0}, 1.0 / 8, {16, true});
  EXPECT_LE(w.width, 16u);
  EXPECT_NEAR(w.total(), 1.0, 1e-10);
}

TEST(Lattice, EngineMatchesBruteForceSum) {
  for (BoundaryMode b : {BoundaryMode::zero_extended, BoundaryMode::periodic}) {
    const auto f = random_grid(8, b, 9);
    const double h = f.resolution();
    const LagWindow window = lag_window_for(f);
    const LagBox w1 = lag_weights({SlotKind::sphere_sharp, {16, 0.1, 0.5}, 0.0}, h, window);
    const LagBox w2 = lag_weights({SlotKind::sphere_gauss, {16, 0.0, 0.3}, 0.1}, h, window);
    for (std::size_t n : {1u, 2u}) {
      FormConfig cfg;
      cfg.slots = n == 1 ? std::vector<const LagBox*>{&w1} : std::vector<const LagBox*>{&w1, &w2};
      const double fast = evaluate_forms(f, {cfg}).front();
      double slow = 0.0;
      for (long long ay = w1.y0; ay < w1.y0 + static_cast<long long>(w1.height); ++ay) {
        for (long long ax = w1.x0; ax < w1.x0 + static_cast<long long>(w1.width); ++ax) {
          if (w1(ax, ay) == 0.0) continue;
          if (n == 1) {
            slow += w1(ax, ay) * naive_product_sum(f, {{ax, ay}});
            continue;
          }
          for (long long by = w2.y0; by < w2.y0 + static_cast<long long>(w2.height); ++by) {
            for (long long bx = w2.x0; bx < w2.x0 + static_cast<long long>(w2.width); ++bx) {
              if (w2(bx, by) == 0.0) continue;
              slow += w1(ax, ay) * w2(bx, by) * naive_product_sum(f, {{ax, ay}, {bx, by}});
            }
          }
        }
      }
      EXPECT_NEAR(fast, slow, 1e-11) << "n=" << n << (b == BoundaryMode::periodic ? " periodic" : " zero");
    }
  }
}

TEST(Lattice, BatchEqualsSeparateEvaluations) {
  const auto f = random_grid(16, BoundaryMode::zero_extended, 13);
  const double h = f.resolution();
  const LagBox a = lag_weights({SlotKind::sphere_sharp, {32, 0.0, 0.4}, 0.0}, h, lag_window_for(f));
  const LagBox b = lag_weights({SlotKind::sphere_gauss, {32, 0.0, 0.4}, 0.2}, h, lag_window_for(f));
  const FormConfig c1{{&a, &b}}, c2{{&b, &a}}, c3{{&b, &b}};
  const auto batch = evaluate_forms(f, {c1, c2, c3});
  EXPECT_NEAR(batch[0], evaluate_forms(f, {c1}).front(), 1e-14);
  EXPECT_NEAR(batch[2], evaluate_forms(f, {c3}).front(), 1e-14);
  // Slot order does not matter for the form.
  EXPECT_NEAR(batch[0], batch[1], 1e-12);
}

TEST(Lattice, BudgetIsEnforced) {
  const auto f = random_grid(16, BoundaryMode::zero_extended, 17);
  const LagBox a = lag_weights({SlotKind::sphere_sharp, {32, 0.0, 0.4}, 0.0}, f.resolution(), lag_window_for(f));
  EngineOptions opt;
  opt.budget = 10.0;
  EXPECT_THROW(evaluate_forms(f, {FormConfig{{&a, &a}}}, opt), BudgetExceeded);
}
