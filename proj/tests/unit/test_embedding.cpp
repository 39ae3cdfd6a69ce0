#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hdl/counterexamples.hpp"
#include "hdl/counting.hpp"
#include "hdl/embedding.hpp"
#include "hdl/errors.hpp"
#include "hdl/parallel.hpp"
#include "support.hpp"

using namespace hdl;

namespace {

PlanarSet shapes(std::vector<Shape> s, double eta = 0.0) { return PlanarSet::from_shapes(std::move(s), eta); }

std::vector<std::pair<double, double>> sorted_vertices(const HypercubeCopy& c) {
  std::vector<std::pair<double, double>> v;
  for (const Vec2& p : c.vertices) v.emplace_back(p.x, p.y);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Embedding, FullSquareContainsUnitSquare) {
  const auto a = shapes({Rect{{0, 0}, {4, 4}}});
  const SearchResult r = find_copy(a, {1.0, 1.0});
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_TRUE(verify_copy(a, *r.copy));
  EXPECT_EQ(r.copy->vertices.size(), 4u);
  EXPECT_GE(r.copy->min_pairwise_gap, r.copy->eta_gap);
}

TEST(Embedding, FullSquareContainsSmallCubes) {
  const auto a = shapes({Rect{{0, 0}, {3, 3}}});
  for (int n = 1; n <= 3; ++n) {
    for (double lambda : {0.2, 0.5, 3.0 / (n + 1)}) {
      SearchSpec spec;
      spec.angles = 72;
      const SearchResult r = find_copy(a, std::vector<double>(n, lambda), spec);
      ASSERT_EQ(r.status, SearchStatus::found) << "n=" << n << " lambda=" << lambda;
      EXPECT_TRUE(verify_copy(a, *r.copy));
    }
  }
}

TEST(Embedding, DiskContainsThreeCube) {
  const auto a = shapes({Disk{{0, 0}, 10.0}});
  const SearchResult r = find_copy(a, {1.0, 1.0, 1.0});
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_TRUE(verify_copy(a, *r.copy));
}

TEST(Embedding, TwoPointsAvoidDistanceTwo) {
  const auto a = shapes({Disk{{0, 0}, 0.01}, Disk{{1, 0}, 0.01}});
  EXPECT_EQ(find_copy(a, {2.0}).status, SearchStatus::not_found);
  EXPECT_EQ(find_copy(a, {1.0}).status, SearchStatus::found);
}

TEST(Embedding, VerifyRejectsNudgedAndDegenerateCopies) {
  const auto a = shapes({Rect{{0, 0}, {2, 2}}}, 0.001);
  HypercubeCopy c = make_copy({0.5, 0.5}, {{1, 0}, {0, 1}}, {1, 1}, 0.01, 0.001);
  EXPECT_TRUE(verify_copy(a, c));
  HypercubeCopy moved = c;
  moved.vertices[3] = {2.0 + 10 * 0.001, 1.5};
  EXPECT_FALSE(verify_copy(a, moved));
  const HypercubeCopy degenerate = make_copy({0.5, 0.5}, {{1, 0}, {1, 0}}, {1, 1}, 0.01, 0.001);
  EXPECT_FALSE(verify_copy(a, degenerate));
}

TEST(Embedding, ResultIsInvariantUnderShapePermutation) {
  const std::vector<Shape> s{Disk{{2, 2}, 1.0}, Rect{{3, 0}, {5, 1}}, Annulus{{6, 6}, 0.5, 1.5}};
  std::vector<Shape> r(s.rbegin(), s.rend());
  const auto a = find_copy(shapes(s), {1.3, 0.9});
  const auto b = find_copy(shapes(r), {1.3, 0.9});
  ASSERT_EQ(a.status, SearchStatus::found);
  ASSERT_EQ(b.status, SearchStatus::found);
  EXPECT_EQ(sorted_vertices(*a.copy), sorted_vertices(*b.copy));
}

TEST(Embedding, ResultIsIndependentOfThreadCount) {
  const auto a = shapes({Annulus{{0, 0}, 2.0, 3.0}});
  const unsigned before = thread_count();
  set_thread_count(1);
  const auto one = find_copy(a, {1.0, 2.0});
  set_thread_count(4);
  const auto four = find_copy(a, {1.0, 2.0});
  set_thread_count(before);
  ASSERT_EQ(one.status, SearchStatus::found);
  EXPECT_EQ(sorted_vertices(*one.copy), sorted_vertices(*four.copy));
  EXPECT_EQ(one.membership_tests, four.membership_tests);
}

TEST(Embedding, BudgetGivesResumableCursor) {
  const auto a = shapes({Disk{{0, 0}, 0.01}, Disk{{1, 0}, 0.01}});
  SearchSpec spec;
  spec.membership_budget = 100.0;
  const auto partial = find_copy(a, {2.0}, spec);
  ASSERT_EQ(partial.status, SearchStatus::partial);
  EXPECT_LT(partial.cursor, partial.base_points);
  spec.membership_budget = 4e9;
  spec.resume_from = partial.cursor;
  EXPECT_EQ(find_copy(a, {2.0}, spec).status, SearchStatus::not_found);
}

TEST(Embedding, RectangularBoxLengths) {
  const auto a = shapes({Rect{{0, 0}, {4, 4}}});
  const auto r = find_copy(a, {1.0, 2.5});
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_NEAR(norm(r.copy->edges[0]), 1.0, 1e-12);
  EXPECT_NEAR(norm(r.copy->edges[1]), 2.5, 1e-12);
}

TEST(Embedding, BitmapAgreesWithShapes) {
  const std::vector<Shape> s{Disk{{1.0, 1.0}, 0.6}};
  const auto grid = make_indicator(s, 2.0, 1.0 / 64, BoundaryMode::zero_extended);
  const auto bitmap = PlanarSet::from_bitmap(grid);
  const auto exact = shapes(s);
  for (std::size_t j = 0; j < 64; ++j) {
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(bitmap.contains(grid.node(i, j)), exact.contains(grid.node(i, j)));
  }
}

TEST(Embedding, CountingPositivityImpliesSearchSuccess) {
  const auto grid = random_mask(1.0, 64, 0.3, 555);
  CountingParams p;
  p.n = 2;
  p.lambda = 0.2;
  p.quadrature_nodes = 64;
  // A positive count means some non-degenerate tuple has every vertex in the set.
  ASSERT_GT(counting_sharp(grid, p).value, 0.0);
  SearchSpec spec;
  spec.angles = 64;
  const auto set = PlanarSet::from_bitmap(grid);
  const auto r = find_copy(set, {0.2, 0.2}, spec);
  ASSERT_EQ(r.status, SearchStatus::found);
  EXPECT_TRUE(verify_copy(set, *r.copy));
}

TEST(Embedding, BanachDensity) {
  EXPECT_NEAR(estimate_banach_density(shapes({Rect{{0, 0}, {10, 10}}}), {2.0, 10.0}).value, 1.0, 1e-12);
  const auto stripes = shapes({periodic_stripes(0, 1.0, 3.0, 0.0, 0.0, 60.0, 0.0, 60.0)});
  EXPECT_NEAR(estimate_banach_density(stripes, {30.0}, 600).value, 1.0 / 3.0, 0.05 / 3.0);
  EXPECT_EQ(estimate_banach_density(shapes({}), {1.0}).value, 0.0);
  EXPECT_THROW(estimate_banach_density(stripes, {2.0, 1.0}), InvalidArgument);
}

TEST(Embedding, ScaleScanOnDisk) {
  SearchSpec spec;
  spec.angles = 180;
  const auto t = scale_scan(shapes({Disk{{0, 0}, 10.0}}), 0.5, 5.0, 10, 2, spec);
  ASSERT_EQ(t.rows.size(), 10u);
  for (const auto& row : t.rows) EXPECT_EQ(row.status, SearchStatus::found);
  ASSERT_TRUE(t.lambda0.has_value());
  EXPECT_DOUBLE_EQ(*t.lambda0, 0.5);
  EXPECT_NE(to_csv(t).find("lambda,found,status"), std::string::npos);
}

TEST(Embedding, ScaleScanOnTwoFarDisks) {
  const auto a = shapes({Disk{{0, 0}, 1.0}, Disk{{100, 0}, 1.0}});
  SearchSpec spec;
  spec.x_step = 0.05;
  spec.angles = 2000;
  const auto t = scale_scan(a, 0.5, 1.5, 3, 1, spec);
  for (const auto& row : t.rows) EXPECT_EQ(row.status, SearchStatus::found);
  EXPECT_EQ(scale_scan(a, 50.0, 50.0, 1, 1, spec).rows.front().status, SearchStatus::not_found);
  const auto far = scale_scan(a, 99.0, 101.0, 3, 1, spec);
  for (const auto& row : far.rows) EXPECT_EQ(row.status, SearchStatus::found);
  const auto empty = scale_scan(shapes({}), 0.5, 1.0, 2, 1);
  for (const auto& row : empty.rows) EXPECT_NE(row.status, SearchStatus::found);
  EXPECT_FALSE(empty.lambda0.has_value());
}

TEST(Counterexamples, IntegerTranslatesAvoidHalf) {
  const auto r = avoided_distance_demo(AvoidanceKind::banach_Z, std::nullopt, parse_rational("0.5"));
  EXPECT_FALSE(r.copy_exists);
  // Differences are [0, 1/5] and [k - 1/5, k + 1/5].
  ASSERT_GE(r.differences.size(), 2u);
  EXPECT_EQ(r.differences[0].hi, Rational(1, 5));
  EXPECT_EQ(r.differences[1].lo, Rational(4, 5));
  EXPECT_TRUE(avoided_distance_demo(AvoidanceKind::banach_Z, std::nullopt, Rational(7)).copy_exists);
}

TEST(Counterexamples, StripesAvoidOneAndAHalfEpsilon) {
  const Rational eps = parse_rational("0.01");
  EXPECT_EQ(eps, Rational(1, 100));
  const auto no = avoided_distance_demo(AvoidanceKind::stripes, eps, Rational(3, 2) * eps);
  EXPECT_FALSE(no.copy_exists);
  const auto yes = avoided_distance_demo(AvoidanceKind::stripes, eps, 3 * eps);
  ASSERT_TRUE(yes.copy_exists);
  ASSERT_TRUE(yes.witness.has_value());
  EXPECT_EQ(yes.witness->second - yes.witness->first, 3 * eps);
  EXPECT_THROW(avoided_distance_demo(AvoidanceKind::stripes, std::nullopt, eps), InvalidArgument);
}

TEST(Counterexamples, RationalParsing) {
  EXPECT_EQ(parse_rational("3/200"), Rational(3, 200));
  EXPECT_EQ(parse_rational("-1.5e-2"), Rational(-3, 200));
  EXPECT_EQ(exact_rational(0.5), Rational(1, 2));
  EXPECT_THROW(parse_rational("abc"), InvalidArgument);
}

TEST(Pigeonhole, FullSquareSelectsFirstInterval) {
  PlanarGrid full(1.0, 64, BoundaryMode::zero_extended, Placement::cell_centered);
  for (auto& v : full.values()) v = 1.0;
  PigeonholeSettings s;
  s.delta = 1.0;
  s.J = 2;
  s.constants = test::constants().decomposition();
  s.c_J = test::constants().c_J;
  s.search.angles = 90;
  const auto r = pigeonhole_interval(full, s);
  EXPECT_EQ(r.j, 1);
  EXPECT_EQ(r.lo, 0.25);
  EXPECT_EQ(r.hi, 0.5);
  ASSERT_EQ(r.witnesses.size(), 5u);
  for (const auto& w : r.witnesses) EXPECT_TRUE(w.verified) << w.lambda;
  EXPECT_FALSE(r.witness_not_found_at_resolution);
}

TEST(Pigeonhole, RejectsSetsBelowDelta) {
  const auto grid = random_mask(1.0, 64, 0.3, 8);
  PigeonholeSettings s;
  s.delta = 0.5;
  EXPECT_THROW(pigeonhole_interval(grid, s), InvalidArgument);
}

TEST(Pigeonhole, JBoundFromConstants) {
  const auto& k = test::constants();
  for (int n = 1; n <= 3; ++n) {
    for (double delta : {0.5, 0.25}) {
      const double log2_bound = std::log2(k.c_J) - (3.0 * n + 1.0) * std::ldexp(1.0, n + 1) * std::log2(delta);
      EXPECT_LE(log2_J_theory(n, delta, k.decomposition()), log2_bound) << n << " " << delta;
    }
  }
}
