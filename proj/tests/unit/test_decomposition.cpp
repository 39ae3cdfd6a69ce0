#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hdl/decomposition.hpp"
#include "hdl/errors.hpp"
#include "hdl/numeric.hpp"
#include "hdl/planar_set.hpp"
#include "support.hpp"

using namespace hdl;

namespace {

PlanarGrid disk(double h = 1.0 / 16) {
  return make_indicator({Disk{{4.0, 4.0}, 2.5}}, 8.0, h, BoundaryMode::zero_extended);
}

double integral_power(const PlanarGrid& f, int p) {
  double s = 0.0;
  for (double v : f.values()) s += std::pow(v, p);
  return s * f.resolution() * f.resolution();
}

}  // namespace

TEST(Decomposition, LadderValidation) {
  EXPECT_NO_THROW((ScaleLadder{{0.5, 1.0, 2.0}}.validate(4.0)));
  EXPECT_THROW((ScaleLadder{{0.5, 0.9}}.validate()), InvalidArgument);
  EXPECT_THROW((ScaleLadder{{1.0, 2.0, 4.0}}.validate(6.0)), InvalidArgument);
}

TEST(Decomposition, StructuredPartOfConstantIsArea) {
  PlanarGrid one(8.0, 64, BoundaryMode::periodic, Placement::cell_centered);
  for (auto& v : one.values()) v = 1.0;
  FormSettings s;
  s.lambda = 2.0;
  EXPECT_NEAR(structured_part(one, s), 64.0, 1e-9);
  s.n = 2;
  EXPECT_NEAR(structured_ratio(one, s), 1.0, 1e-9);
}

TEST(Decomposition, StructuredBoundOnRandomMask) {
  const auto f = random_mask(8.0, 64, 0.4, 2024);
  FormSettings s;
  const auto check = check_structured_bound(f, {1.0, 2.0}, s, test::constants().c_str);
  EXPECT_TRUE(check.pass);
  EXPECT_GE(check.min_ratio, test::constants().c_str);
}

TEST(Decomposition, TelescopingInLogT) {
  FormSettings s;
  s.lambda = 1.5;
  const auto r = telescoping(disk(), 0.25, 1.0, s);
  EXPECT_LE(r.relative_error, 0.01);
  EXPECT_TRUE(r.l_forms.front().converged);
  EXPECT_NEAR(r.n_alpha - r.n_beta, r.l_sum, 0.01 * std::abs(r.n_alpha - r.n_beta));
}

TEST(Decomposition, EmptyScaleRangeGivesZero) {
  FormSettings s;
  s.lambda = 1.5;
  const auto l = L_form(disk(), 0.5, 0.5 + 1e-6, 1, s);
  EXPECT_NEAR(l.value, 0.0, 1e-6);
}

TEST(Decomposition, SlotSymmetryForRadialSet) {
  FormSettings s;
  s.n = 2;
  s.lambda = 1.0;
  const auto f = make_indicator({Disk{{2.0, 2.0}, 1.2}}, 4.0, 1.0 / 8, BoundaryMode::zero_extended);
  const auto r = telescoping(f, 0.5, 1.0, s, 16);
  ASSERT_EQ(r.l_forms.size(), 2u);
  EXPECT_NEAR(r.l_forms[0].value, r.l_forms[1].value, 1e-9 * std::max(1.0, std::abs(r.l_forms[0].value)));
  EXPECT_LE(r.relative_error, 0.01);
}

TEST(Decomposition, ThetaOfUnitSquare) {
  const auto f = make_indicator({Rect{{2.0, 2.0}, {3.0, 3.0}}}, 8.0, 1.0 / 16, BoundaryMode::zero_extended);
  const auto t = theta_forms(f, {1.0});
  EXPECT_NEAR(t.theta_sum, 2.0 * kPi, 0.02 * 2.0 * kPi);
  EXPECT_NEAR(t.target, 2.0 * kPi * integral_power(f, 2), 1e-12);
  EXPECT_TRUE(t.positive);
}

TEST(Decomposition, ThetaTwoSlotsOnRandomMask) {
  const auto f = random_mask(4.0, 32, 0.5, 31337);
  const auto t = theta_forms(f, {1.0, std::sqrt(2.0)});
  EXPECT_NEAR(t.theta_sum, 2.0 * kPi * integral_power(f, 4), 0.02 * t.target);
  EXPECT_TRUE(t.positive);
  EXPECT_GE(t.min_theta, -1e-6 * t.target);
  EXPECT_LE(t.theta_sum, t.target * 1.02);
}

TEST(Decomposition, ErrorPartVanishesAtEpsilonOne) {
  FormSettings s;
  const auto e = check_error_bound(disk(), ScaleLadder{{0.5, 1.0, 2.0}}, 1.0, s, test::constants().c_err);
  for (std::size_t j = 0; j < e.lambdas.size(); ++j) EXPECT_EQ(e.n_eps[j], e.n_one[j]);
  EXPECT_EQ(e.sum, 0.0);
}

TEST(Decomposition, ErrorBoundHoldsOnDisk) {
  FormSettings s;
  const auto e = check_error_bound(disk(), ScaleLadder{{0.25, 0.5, 1.0, 2.0}}, 0.25, s, test::constants().c_err);
  EXPECT_TRUE(e.pass);
  EXPECT_LE(e.sum, e.bound);
}

TEST(Decomposition, UniformPartOfConstantVanishes) {
  PlanarGrid one(8.0, 64, BoundaryMode::periodic, Placement::cell_centered);
  for (auto& v : one.values()) v = 1.0;
  FormSettings s;
  s.lambda = 1.0;
  EXPECT_NEAR(uniform_part(one, 0.25, s), 0.0, 1e-9);
}

TEST(Decomposition, DecomposeTelescopesExactly) {
  FormSettings s;
  const auto r = decompose(disk(), ScaleLadder{{0.5, 1.0, 2.0}}, 0.25, s, test::constants().decomposition());
  ASSERT_EQ(r.rows.size(), 3u);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.structured + row.error + row.uniform, row.n_zero, 1e-12 * std::max(1.0, row.n_zero));
    EXPECT_EQ(row.telescoped, row.structured + row.error + row.uniform);
  }
  EXPECT_TRUE(r.structured_pass);
  EXPECT_TRUE(r.error_pass);
  EXPECT_TRUE(r.uniform_pass);
  const std::string csv = to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "lambda,epsilon,structured,error,uniform,bound_rhs,pass,telescoping_sum,n_zero,structured_lower");
}

TEST(Decomposition, ScaleSplitRadicandStaysPositive) {
  // r = sqrt((t lambda)^2 - 2 s^2) for s in [theta t lambda, e theta t lambda],
  // theta = 1 / (10 e); r and s must stay comparable to t lambda.
  const double theta = 0.1 / std::exp(1.0);
  double min_radicand = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
  for (double tl : {1e-3, 0.5, 1.0, 7.0}) {
    for (int i = 0; i <= 1000; ++i) {
      const double s = theta * tl * (1.0 + (std::exp(1.0) - 1.0) * i / 1000.0);
      const double radicand = (tl * tl - 2.0 * s * s) / (tl * tl);
      min_radicand = std::min(min_radicand, radicand);
      max_ratio = std::max(max_ratio, tl * std::sqrt(radicand) / s);
    }
  }
  EXPECT_NEAR(min_radicand, 0.98, 1e-12);
  EXPECT_LE(max_ratio, 10.0 * std::exp(1.0) + 1e-9);
}
