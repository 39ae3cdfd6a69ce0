#include "hdl/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hdl/decomposition.hpp"
#include "hdl/embedding.hpp"
#include "hdl/gowers.hpp"
#include "hdl/sphere.hpp"
#include "hdl/workloads.hpp"

namespace hdl {

namespace {

PlanarGrid disk_set() {
  return make_indicator({Disk{{4.0, 4.0}, 3.0}}, 8.0, 1.0 / 16.0, BoundaryMode::zero_extended);
}

PlanarGrid square_set() {
  return make_indicator({Rect{{2.0, 2.0}, {6.0, 6.0}}}, 8.0, 1.0 / 16.0, BoundaryMode::zero_extended);
}

}  // namespace

double sweep_c_ball() { return lower_bound_constant(256).c_ball; }

double sweep_c_decay() { return sphere_decay_profile(10.0, 100.0, 1801).max_scaled; }

double sweep_c_domination() {
  std::vector<Vec2> points;
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0}) {
    for (double a : {0.0, 0.3, 0.785398}) points.push_back(polar(r, a));
  }
  double worst = 0.0;
  for (double eps : {1.0, 0.5, 0.25, 0.125}) {
    for (double t : {eps, 0.5 * (eps + 1.0), 1.0}) {
      DominationParams p;
      p.lambda = 1.0;
      p.t = t;
      p.epsilon = eps;
      worst = std::max(worst, gaussian_domination_check(p, points).max_ratio);
    }
  }
  return worst;
}

double sweep_c_gcs(std::uint64_t seed, std::size_t count) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const CubeGrid c = random_cube_grid(seed, i);
    lo = std::min(lo, gowers_cs_bound(c.grid, c.cube, 2).ratio);
  }
  return lo;
}

double sweep_c_str(std::uint64_t seed, std::size_t count) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const PlanarGrid f = random_density_set(seed, i);
    if (measure(f) == 0.0) continue;
    for (int n : {1, 2}) {
      FormSettings s;
      s.n = n;
      lo = std::min(lo, check_structured_bound(f, {1.0, 2.0, 4.0}, s, 0.0).min_ratio);
    }
  }
  return lo;
}

double sweep_c_err(std::uint64_t seed) {
  std::vector<PlanarGrid> sets{disk_set(), square_set()};
  for (std::size_t i = 0; i < 4; ++i) sets.push_back(random_density_set(seed, i));
  const std::vector<ScaleLadder> ladders{{{0.125, 0.5, 2.0}}, {{0.5, 1.0, 2.0, 4.0}}};
  double hi = 0.0;
  const auto ratio = [](const ErrorCheck& e, double eps, int n, double side) {
    return e.sum / (std::pow(eps, -3.0 * n) * std::log(1.0 / eps) * side * side);
  };
  FormSettings s;
  s.n = 1;
  for (const auto& f : sets) {
    for (const auto& ladder : ladders) {
      for (double eps : {0.5, 0.25, 0.125}) {
        hi = std::max(hi, ratio(check_error_bound(f, ladder, eps, s, 0.0), eps, 1, f.side()));
      }
    }
  }
  s.n = 2;
  hi = std::max(hi, ratio(check_error_bound(sets.front(), ladders.front(), 0.25, s, 0.0), 0.25, 2, 8.0));
  return hi;
}

double sweep_c_uni(std::uint64_t seed) {
  const std::vector<double> eps{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  std::vector<PlanarGrid> sets{make_indicator(annulus_set(8.0, 1.0), 8.0, 1.0 / 16.0, BoundaryMode::zero_extended),
                               disk_set()};
  for (std::size_t i = 0; i < 4; ++i) sets.push_back(random_density_set(seed + 1, i));
  double hi = 0.0;
  FormSettings s;
  s.lambda = 1.0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    for (int n : {1, 2}) {
      if (n == 2 && k > 1) continue;
      s.n = n;
      hi = std::max(hi, check_uniform_bound(sets[k], eps, s, 0.0).max_ratio);
    }
  }
  return hi;
}

double sweep_c_J(const DecompositionConstants& c) {
  double hi = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k <= 8; ++k) {
      const double log2_bound = (3.0 * n + 1.0) * std::ldexp(1.0, n + 1) * k;
      hi = std::max(hi, std::exp2(log2_J_theory(n, std::ldexp(1.0, -k), c) - log2_bound));
    }
  }
  return hi;
}

Constants calibrate(const CalibrationOptions& options, const CalibrationLog& log) {
  const auto note = [&](const std::string& name, double raw, double frozen) {
    if (!log) return;
    std::ostringstream msg;
    msg.precision(6);
    msg << name << ": sweep " << raw << ", frozen " << frozen;
    log(msg.str());
  };
  const double f = options.safety;
  Constants c;
  c.version = options.version;

  double raw = sweep_c_ball();
  c.c_ball = raw / f;
  note("c_ball", raw, c.c_ball);
  raw = sweep_c_decay();
  c.c_decay = raw * f;
  note("c_decay", raw, c.c_decay);
  raw = sweep_c_domination();
  c.c_domination = raw * f;
  note("c_domination", raw, c.c_domination);
  raw = sweep_c_gcs(options.seed, 100);
  c.c_gcs = raw / f;
  note("c_gcs", raw, c.c_gcs);
  raw = sweep_c_str(options.seed, 50);
  c.c_str = raw / f;
  note("c_str", raw, c.c_str);
  raw = sweep_c_err(options.seed);
  c.c_err = raw * f;
  note("c_err", raw, c.c_err);
  raw = sweep_c_uni(options.seed);
  c.c_uni = raw * f;
  note("c_uni", raw, c.c_uni);
  raw = sweep_c_J(c.decomposition());
  c.c_J = raw * f;
  note("c_J", raw, c.c_J);

  c.settings = {{"seed", options.seed},
                {"safety", f},
                {"c_ball", "lower_bound_constant, M = 256, 401 radii x 64 directions"},
                {"c_decay", "sphere_decay_profile over |xi| in [10, 100], 1801 samples, M >= 16 |xi|"},
                {"c_domination", "lambda = 1, eps in {1, 1/2, 1/4, 1/8}, t in {eps, (1+eps)/2, 1}, 27 points"},
                {"c_gcs", "100 random cube-supported 32x32 grids, n = 2"},
                {"c_str", "50 random block masks on [0,8]^2 at h = 1/8, n in {1,2}, lambda in {1,2,4}, M = 256"},
                {"c_err", "disk, square, 4 masks; ladders {1/8,1/2,2} and {1/2,1,2,4}; eps in {1/2,1/4,1/8}; n = 1, plus n = 2 on the disk"},
                {"c_uni", "annuli, disk (n in {1,2}) and 4 masks (n = 1) at lambda = 1, eps = 2^-1..2^-6"},
                {"c_J", "n in {1,2,3}, delta = 2^-k, k = 0..8, J from the (c_str, c_err, c_uni) constraints"}};
  return c;
}

}  // namespace hdl
