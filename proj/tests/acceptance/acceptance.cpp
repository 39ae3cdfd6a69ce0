// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Seeds differ from the calibration seed (271828) so frozen
// constants are checked on fresh draws.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hdl/constants.hpp"
#include "hdl/counterexamples.hpp"
#include "hdl/counting.hpp"
#include "hdl/decomposition.hpp"
#include "hdl/embedding.hpp"
#include "hdl/gaussian.hpp"
#include "hdl/gowers.hpp"
#include "hdl/numeric.hpp"
#include "hdl/parallel.hpp"
#include "hdl/planar_set.hpp"
#include "hdl/rng.hpp"
#include "hdl/workloads.hpp"
#ifdef HDL_HAVE_RUNNER
#include "hdl/runner.hpp"
#endif

using namespace hdl;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back((ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const Constants& constants() {
  static const Constants c = load_constants(HDL_TEST_CONSTANTS);
  return c;
}

double power_integral(const PlanarGrid& f, int p) {
  double s = 0.0;
  for (double v : f.values()) s += std::pow(v, p);
  return s * f.resolution() * f.resolution();
}

double lens_area(double r, double d) {
  return 2.0 * r * r * std::acos(d / (2.0 * r)) - 0.5 * d * std::sqrt(4.0 * r * r - d * d);
}

// 1. Gaussian identities and the heat equation.
Outcome gaussian_identities() {
  Outcome o;
  double worst = 0.0;
  int substituted = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    CounterRng rng(4242, i);
    const double a = 0.5 + 3.5 * rng.uniform(), b = 0.5 + 3.5 * rng.uniform();
    const auto hh = verify_conv_hh(a, b, 16.0, 1.0 / 32);
    const auto kg = verify_conv_kg(a, b, 16.0, 1.0 / 32);
    worst = std::max({worst, hh.residual, kg.residual});
    substituted += hh.spectral_substitute + kg.spectral_substitute;
  }
  o.check(worst <= 1e-6, "convolution identities, 10 random (alpha, beta): max residual " + fmt(worst) +
                             " <= 1e-6 (" + std::to_string(substituted) + " spectral substitutes)");
  const Vec2 x{0.3, 0.2};
  const double r1 = heat_flow_check(1.0, x, 1e-3), r2 = heat_flow_check(1.0, x, 5e-4);
  const double order = std::log2(r1 / r2);
  o.check(r1 <= 1e-5, "heat equation residual " + fmt(r1) + " <= 1e-5");
  o.check(std::abs(order - 2.0) <= 0.25, "heat residual order " + fmt(order) + " ~ 2");
  return o;
}

// 2. Gowers norms.
Outcome gowers_suite() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    PlanarGrid g(1.0, 32, BoundaryMode::zero_extended, Placement::cell_centered);
    for (std::size_t k = 0; k < g.values().size(); ++k) {
      CounterRng rng(5000 + s, k);
      g.values()[k] = rng.uniform();
    }
    const double direct = gowers_u2_power_direct(g);
    worst = std::max({worst, std::abs(gowers_u2_power_autocorrelation(g) / direct - 1.0),
                      std::abs(gowers_u2_power_fourier(g) / direct - 1.0)});
  }
  o.check(worst <= 1e-6, "U2 three routes on 20 random 32x32 grids: max relative gap " + fmt(worst) + " <= 1e-6");
  const auto square = make_indicator({Rect{{0.5, 0.5}, {1.5, 1.5}}}, 2.0, 1.0 / 64, BoundaryMode::zero_extended);
  const double u2 = gowers_norm(square, 2), target = std::pow(4.0 / 9.0, 0.25);
  o.check(std::abs(u2 / target - 1.0) <= 0.01, "U2 of the unit square " + fmt(u2) + " vs (4/9)^(1/4) " + fmt(target));
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 100; ++i) {
    const CubeGrid c = random_cube_grid(6000, i);
    min_ratio = std::min(min_ratio, gowers_cs_bound(c.grid, c.cube, 2).ratio);
  }
  o.check(constants().c_gcs > 0.0 && min_ratio >= constants().c_gcs,
          "cube bound on 100 cube-supported grids: min ratio " + fmt(min_ratio) + " >= c_gcs " + fmt(constants().c_gcs));
  return o;
}

// 3. Counting forms.
Outcome counting_suite() {
  Outcome o;
  const auto disk = make_indicator({Disk{{4.0, 4.0}, 2.0}}, 8.0, 1.0 / 32, BoundaryMode::zero_extended);
  CountingParams p;
  p.lambda = 1.5;
  const double sharp = counting_sharp(disk, p).value, lens = lens_area(2.0, 1.5);
  o.check(std::abs(sharp / lens - 1.0) <= 0.02, "n=1 disk " + fmt(sharp) + " vs lens area " + fmt(lens));
  double previous = std::numeric_limits<double>::infinity();
  bool monotone = true;
  std::string gaps;
  for (double eps : {0.4, 0.3, 0.2, 0.1, 0.05}) {
    p.epsilon = eps;
    const double gap = std::abs(counting_smooth(disk, p).value - sharp);
    monotone = monotone && gap < previous;
    previous = gap;
    gaps += " " + fmt(gap);
  }
  o.check(monotone, "|N^eps - N^0| over eps = 0.4..0.05 decreasing:" + gaps);
  const auto coarse = make_indicator({Disk{{4.0, 4.0}, 2.0}}, 8.0, 1.0 / 16, BoundaryMode::zero_extended);
  for (std::uint64_t seed : {7001u, 7002u}) {
    CountingParams q;
    q.n = 2;
    q.lambda = 1.0;
    const double exact = counting_sharp(coarse, q).value;
    q.estimator = Estimator::monte_carlo;
    q.seed = seed;
    q.mc_samples = 4000;
    const auto mc = counting_sharp(coarse, q);
    // The exact estimator carries no sampling error, so the combined stderr is the Monte Carlo one.
    o.check(std::abs(mc.value - exact) <= 3.0 * mc.stderr_estimate,
            "n=2 Monte Carlo (seed " + std::to_string(seed) + ") " + fmt(mc.value) + " vs exact " + fmt(exact) +
                ", 3 stderr = " + fmt(3.0 * mc.stderr_estimate));
  }
  return o;
}

// 4. Theta forms.
Outcome theta_suite() {
  Outcome o;
  struct Case {
    std::string name;
    PlanarGrid f;
  };
  const std::vector<Case> sets{
      {"square", make_indicator({Rect{{1.5, 1.5}, {2.5, 2.5}}}, 4.0, 1.0 / 16, BoundaryMode::zero_extended)},
      {"disk", make_indicator({Disk{{2.0, 2.0}, 1.0}}, 4.0, 1.0 / 16, BoundaryMode::zero_extended)},
      {"mask", random_mask(4.0, 64, 0.5, 8080)},
  };
  for (const auto& c : sets) {
    for (const std::vector<double>& gammas : {std::vector<double>{1.0}, std::vector<double>{1.0, 1.5}}) {
      const int n = static_cast<int>(gammas.size());
      const auto t = theta_forms(c.f, gammas);
      const double target = 2.0 * kPi * power_integral(c.f, 1 << n);
      o.check(t.min_theta >= -1e-6 * target, c.name + " n=" + std::to_string(n) + ": min Theta " + fmt(t.min_theta) +
                                                 " >= -1e-6 * " + fmt(target));
      o.check(std::abs(t.theta_sum / target - 1.0) <= 0.02,
              c.name + " n=" + std::to_string(n) + ": sum Theta " + fmt(t.theta_sum) + " vs " + fmt(target));
    }
  }
  return o;
}

// 5. Decomposition.
Outcome decomposition_suite() {
  Outcome o;
  const auto& k = constants();
  struct Case {
    std::string name;
    PlanarGrid f;
    double lambda;
  };
  for (int n : {1, 2}) {
    // n=2 runs on a coarser window to stay inside the runtime budget on one core.
    const double side = n == 1 ? 8.0 : 4.0;
    const double h = 1.0 / 16;
    const std::vector<Case> sets{
        {"disk", make_indicator({Disk{{side / 2, side / 2}, side / 4}}, side, h, BoundaryMode::zero_extended), side / 5},
        {"square", make_indicator({Rect{{side / 4, side / 4}, {3 * side / 4, 3 * side / 4}}}, side, h,
                                  BoundaryMode::zero_extended),
         side / 5},
        {"mask", random_mask(side, static_cast<std::size_t>(side / h), 0.5, 9090), side / 5},
    };
    for (const auto& c : sets) {
      FormSettings s;
      s.n = n;
      s.lambda = c.lambda;
      const auto t = telescoping(c.f, 0.25, 1.0, s);
      o.check(t.relative_error <= 0.01, "telescoping " + c.name + " n=" + std::to_string(n) + ": relative error " +
                                            fmt(t.relative_error) + " <= 1%");
    }
  }

  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 50; ++i) {
    const auto f = random_density_set(9100, i);
    for (int n : {1, 2}) {
      FormSettings s;
      s.n = n;
      min_ratio = std::min(min_ratio, check_structured_bound(f, {1.0, 2.0}, s, k.c_str).min_ratio);
    }
  }
  o.check(min_ratio >= k.c_str, "structured ratio over 50 random sets (n=1,2; lambda=1,2): min " + fmt(min_ratio) +
                                    " >= c_str " + fmt(k.c_str));

  std::vector<double> eps;
  for (int e = 1; e <= 6; ++e) eps.push_back(std::ldexp(1.0, -e));
  struct Uniform {
    std::string name;
    PlanarGrid f;
    int n;
  };
  const std::vector<Uniform> uniform_sets{
      {"annuli", make_indicator(annulus_set(8.0, 1.0), 8.0, 1.0 / 16, BoundaryMode::zero_extended), 1},
      {"annuli", make_indicator(annulus_set(8.0, 1.0), 8.0, 1.0 / 16, BoundaryMode::zero_extended), 2},
      {"disk", make_indicator({Disk{{4.0, 4.0}, 2.5}}, 8.0, 1.0 / 16, BoundaryMode::zero_extended), 1},
      {"random set", random_density_set(9200, 0), 1},
      {"random set", random_density_set(9200, 1), 1},
  };
  double max_ratio = 0.0;
  bool uniform_ok = true;
  for (const auto& u : uniform_sets) {
    FormSettings s;
    s.n = u.n;
    s.lambda = 1.0;
    const auto r = check_uniform_bound(u.f, eps, s, k.c_uni);
    uniform_ok = uniform_ok && r.pass && !r.inconclusive;
    max_ratio = std::max(max_ratio, r.max_ratio);
  }
  o.check(uniform_ok, "uniform part over eps = 2^-1..2^-6 on 5 set/n pairs: max |N^0 - N^eps| / (eps^1/2 R^2) " +
                          fmt(max_ratio) + " <= C_uni " + fmt(k.c_uni));

  // Ratio-4 ladders, the spacing of the pigeonhole intervals; J doubles by
  // extending the ladder to finer scales at fixed R.
  const auto disk = make_indicator({Disk{{4.0, 4.0}, 3.2}}, 8.0, 1.0 / 64, BoundaryMode::zero_extended);
  FormSettings s;
  for (double ratio : {4.0, 2.0}) {
    std::vector<double> six;
    for (int j = 5; j >= 0; --j) six.push_back(2.0 / std::pow(ratio, j));
    const std::vector<double> three(six.end() - 3, six.end());
    const double a = check_error_bound(disk, ScaleLadder{three}, 0.25, s, k.c_err).normalized_sum;
    const double b = check_error_bound(disk, ScaleLadder{six}, 0.25, s, k.c_err).normalized_sum;
    const double growth = b / a - 1.0;
    if (ratio == 4.0) {
      o.check(growth <= 0.10, "error sum growth J=3 -> 6 (ratio-4 ladder): " + fmt(100 * growth) + "% <= 10%");
    } else {
      o.notes.push_back("info error sum growth J=3 -> 6 (ratio-2 ladder, not a criterion): " + fmt(100 * growth) + "%");
    }
  }
  return o;
}

// 6. Embedding.
Outcome embedding_suite() {
  Outcome o;
  const auto square = PlanarSet::from_shapes({Rect{{0.0, 0.0}, {4.0, 4.0}}});
  const auto disk = PlanarSet::from_shapes({Disk{{0.0, 0.0}, 10.0}});
  for (const auto& [name, set] : {std::pair{"square [0,4]^2", &square}, std::pair{"disk r=10", &disk}}) {
    for (int n = 1; n <= 3; ++n) {
      const auto r = find_copy(*set, std::vector<double>(n, 1.0));
      const bool ok = r.status == SearchStatus::found && verify_copy(*set, *r.copy);
      o.check(ok, std::string(name) + " n=" + std::to_string(n) + " lambda=1: " + to_string(r.status));
    }
  }
  const auto z = avoided_distance_demo(AvoidanceKind::banach_Z, std::nullopt, Rational(1, 2));
  o.check(!z.copy_exists, "banach_Z at lambda = 1/2: exact negative");
  for (const Rational eps : {Rational(1, 10), Rational(1, 100)}) {
    const auto st = avoided_distance_demo(AvoidanceKind::stripes, eps, Rational(3, 2) * eps);
    o.check(!st.copy_exists, "stripes eps = " + eps.str() + " at lambda = 3/2 eps: exact negative");
  }
  PigeonholeSettings ps;
  ps.n = 1;
  ps.delta = 0.45;
  ps.epsilon = 0.5;
  ps.J = 3;
  ps.constants = constants().decomposition();
  ps.c_J = constants().c_J;
  const auto mask = random_mask(1.0, 256, 0.5, 10101);
  const auto r = pigeonhole_interval(mask, ps);
  int verified = 0;
  for (const auto& w : r.witnesses) verified += w.verified;
  const double floor = std::ldexp(1.0, -2 * ps.J);
  o.check(r.length == std::ldexp(1.0, -2 * r.j) && r.length >= floor && verified >= 1,
          "pigeonhole on density-0.5 mask: j=" + std::to_string(r.j) + " (" + r.selected_by + "), length " +
              fmt(r.length) + " >= " + fmt(floor) + ", " + std::to_string(verified) + " verified witnesses");
  return o;
}

// 7. Determinism of the runner.
Outcome determinism_suite() {
  Outcome o;
#ifdef HDL_HAVE_RUNNER
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "hdl_acceptance_determinism";
  fs::remove_all(root);
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  for (const std::string command : {"identities", "counting", "decompose", "embed", "interval", "counterexample"}) {
    std::vector<std::string> reports;
    for (const auto& [dir, threads] : {std::pair{"a", 1u}, std::pair{"b", 1u}, std::pair{"c", 3u}}) {
      cli::RunOptions opt;
      opt.command = command;
      opt.out_dir = (root / dir).string();
      opt.threads = threads;
      opt.use_cache = false;
      opt.constants_path = HDL_TEST_CONSTANTS;
      const auto r = cli::run(opt);
      if (r.exit_code != 0) o.check(false, command + " exited " + std::to_string(r.exit_code) + ": " + r.message);
      reports.push_back(slurp(root / dir / (command + ".json")));
    }
    const bool same = !reports[0].empty() && reports[0] == reports[1] && reports[0] == reports[2];
    o.check(same, command + ": rerun and 3-thread reports byte-identical");
  }
  fs::remove_all(root);
#else
  o.check(false, "built without the runner");
#endif
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "Gaussian identity suite", 30.0, gaussian_identities},
      {2, "Gowers suite", 120.0, gowers_suite},
      {3, "Counting consistency", 300.0, counting_suite},
      {4, "Theta suite", 300.0, theta_suite},
      {5, "Decomposition sweeps", 900.0, decomposition_suite},
      {6, "Embedding", 600.0, embedding_suite},
      {7, "Determinism", 0.0, determinism_suite},
  };
  bool all = true;
  std::vector<std::string> summary;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0.0) o.check(secs <= c.limit_s, "runtime " + fmt(secs) + " s <= " + fmt(c.limit_s) + " s");
    for (const auto& note : o.notes) std::printf("  [%d] %s\n", c.id, note.c_str());
    char line[160];
    std::snprintf(line, sizeof line, "criterion %d %-26s %s (%.1f s)", c.id, c.name.c_str(), o.pass ? "PASS" : "FAIL",
                  secs);
    std::printf("%s\n", line);
    std::fflush(stdout);
    summary.emplace_back(line);
    all = all && o.pass;
  }
  std::printf("\n");
  for (const auto& s : summary) std::printf("%s\n", s.c_str());
  return all ? 0 : 1;
}
