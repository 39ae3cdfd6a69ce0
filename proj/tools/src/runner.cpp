#include "hdl/runner.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "config_access.hpp"
#include "hdl/calibration.hpp"
#include "hdl/constants.hpp"
#include "hdl/counterexamples.hpp"
#include "hdl/counting.hpp"
#include "hdl/decomposition.hpp"
#include "hdl/embedding.hpp"
#include "hdl/errors.hpp"
#include "hdl/gaussian.hpp"
#include "hdl/parallel.hpp"
#include "hdl/planar_set.hpp"
#include "hdl/rng.hpp"
#include "hdl/sphere.hpp"

namespace fs = std::filesystem;

namespace hdl::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &length) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return out.str();
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bytes;
}

// Holds an exclusive flock on <dir>/.lock for its lifetime.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir) {
    fd_ = ::open((dir / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) throw std::runtime_error("cannot lock " + dir.string());
  }
  ~DirLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  int fd_ = -1;
};

struct LoadedSet {
  PlanarGrid grid;
  std::optional<std::vector<Shape>> shapes;
  std::string input_bytes;  // file contents that feed the cache key
};

LoadedSet load_set(const json& c) {
  const json& set = c.at("/set"_json_pointer);
  try {
    if (set.contains("shapes")) {
      const ShapeSpec spec = shape_spec_from_json(set);
      return {make_indicator(spec), spec.shapes, {}};
    }
    if (set.contains("pgm")) {
      const std::string path = set.at("pgm").get<std::string>();
      return {read_pgm(path, set.at("R").get<double>()), std::nullopt, read_file(path)};
    }
    if (set.contains("grid")) {
      const std::string path = set.at("grid").get<std::string>();
      return {load_grid(path), std::nullopt, read_file(path)};
    }
    const json& m = set.at("random_mask");
    const double side = m.at("R").get<double>();
    const BoundaryMode b = m.value("boundary", std::string("zero")) == "periodic" ? BoundaryMode::periodic
                                                                                   : BoundaryMode::zero_extended;
    return {random_mask(side, PlanarGrid::node_count_for(side, m.at("h").get<double>()), m.at("density").get<double>(),
                        m.at("seed").get<std::uint64_t>(), b),
            std::nullopt,
            {}};
  } catch (const InvalidArgument& e) {
    throw ConfigError("/set", e.what());
  } catch (const json::exception& e) {
    throw ConfigError("/set", e.what());
  }
}

struct Invariant {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct Report {
  json body;
  std::optional<std::string> csv;
  std::vector<Invariant> invariants;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

Report run_identities(const json& c, const Constants& k) {
  Report r;
  const auto pairs = static_cast<std::size_t>(integer(c, "/identities/pairs"));
  const auto seed = static_cast<std::uint64_t>(integer(c, "/identities/seed"));
  const double side = number(c, "/identities/R"), h = number(c, "/identities/h");
  const double lo = number(c, "/identities/alpha_range/0"), hi = number(c, "/identities/alpha_range/1");
  const double threshold = number(c, "/identities/threshold");
  json conv = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    CounterRng rng(seed, i);
    const double alpha = lo + (hi - lo) * rng.uniform();
    const double beta = lo + (hi - lo) * rng.uniform();
    const IdentityCheck a = verify_conv_hh(alpha, beta, side, h);
    const IdentityCheck b = verify_conv_kg(alpha, beta, side, h);
    worst = std::max({worst, a.residual, b.residual});
    conv.push_back({{"alpha", alpha},
                    {"beta", beta},
                    {"hh_residual", a.residual},
                    {"hh_spectral_substitute", a.spectral_substitute},
                    {"kg_residual", b.residual},
                    {"kg_spectral_substitute", b.spectral_substitute}});
  }
  r.body["convolution"] = {{"checks", conv}, {"max_residual", worst}, {"threshold", threshold}};
  r.invariants.push_back({"convolution_identities", worst <= threshold, "max residual " + fmt(worst)});

  const double t = number(c, "/identities/heat/t"), dt = number(c, "/identities/heat/dt");
  const Vec2 x{number(c, "/identities/heat/x/0"), number(c, "/identities/heat/x/1")};
  const double heat_threshold = number(c, "/identities/heat/threshold");
  const double r1 = heat_flow_check(t, x, dt), r2 = heat_flow_check(t, x, dt / 2.0);
  const double order = r2 > 0.0 ? std::log2(r1 / r2) : 2.0;
  r.body["heat"] = {{"t", t}, {"dt", dt}, {"residual", r1}, {"residual_half_dt", r2}, {"observed_order", order},
                    {"threshold", heat_threshold}};
  r.invariants.push_back({"heat_equation", r1 <= heat_threshold, "residual " + fmt(r1)});
  r.invariants.push_back({"heat_second_order", r1 == 0.0 || std::abs(order - 2.0) <= 0.25, "order " + fmt(order)});

  json kernels = json::array();
  bool kernels_ok = true;
  for (KernelFamily fam : {KernelFamily::g, KernelFamily::k}) {
    const KernelSpec spec{fam, 1.0};
    const double integral = integrate_kernel(spec, 8.0, 1025);
    const double expected = fam == KernelFamily::g ? 1.0 : 0.0;
    kernels_ok = kernels_ok && std::abs(integral - expected) <= 1e-6;
    kernels.push_back({{"family", to_string(fam)}, {"integral", integral}, {"expected", expected}});
  }
  r.body["kernel_integrals"] = kernels;
  r.invariants.push_back({"kernel_integrals", kernels_ok, "g integrates to 1, k to 0 within 1e-6"});

  const BallBound ball = lower_bound_constant(256);
  r.body["ball_bound"] = {{"c_ball", ball.c_ball}, {"argmin_radius", ball.argmin_radius},
                          {"value_at_origin", ball.value_at_origin}, {"frozen", k.c_ball}};
  r.invariants.push_back({"ball_lower_bound", ball.c_ball > 0.0 && ball.c_ball >= k.c_ball, "c_ball " + fmt(ball.c_ball)});

  const DecayProfile decay = sphere_decay_profile(10.0, 100.0, 1801);
  r.body["sphere_decay"] = {{"max_scaled", decay.max_scaled}, {"argmax", decay.argmax},
                            {"node_count", decay.node_count}, {"frozen", k.c_decay}};
  r.invariants.push_back({"sphere_decay", decay.max_scaled <= k.c_decay, "max " + fmt(decay.max_scaled)});

  std::vector<Vec2> points;
  for (double rad : {0.0, 0.5, 1.0, 1.5, 2.5}) points.push_back(polar(rad, 0.4));
  json dom = json::array();
  bool dom_ok = true;
  for (double eps : {1.0, 0.5, 0.25}) {
    DominationParams p;
    p.t = eps;
    p.epsilon = eps;
    p.constant = k.c_domination;
    const DominationResult d = gaussian_domination_check(p, points);
    dom_ok = dom_ok && d.status != CheckStatus::violated;
    dom.push_back({{"epsilon", eps}, {"status", to_string(d.status)}, {"min_margin", d.min_margin},
                   {"max_ratio", d.max_ratio}, {"min_radicand", d.min_radicand}});
  }
  r.body["gaussian_domination"] = {{"checks", dom}, {"constant", k.c_domination}};
  r.invariants.push_back({"gaussian_domination", dom_ok, "no violated sample"});
  return r;
}

CountingParams counting_params(const json& c, const std::string& base) {
  CountingParams p;
  p.n = static_cast<int>(integer(c, base + "/n"));
  p.lambda = number(c, base + "/lambda");
  p.epsilon = number(c, base + "/epsilon");
  p.quadrature_nodes = static_cast<std::size_t>(integer(c, base + "/quadrature_nodes"));
  p.phase = number(c, base + "/phase");
  p.estimator = estimator_from_string(text(c, base + "/estimator"));
  p.mc_samples = static_cast<std::size_t>(integer(c, base + "/mc_samples"));
  if (has(c, base + "/seed")) p.seed = static_cast<std::uint64_t>(integer(c, base + "/seed"));
  p.budget = number(c, base + "/budget");
  return p;
}

Report run_counting(const json& c) {
  const LoadedSet set = load_set(c);
  const CountingParams p = counting_params(c, "/counting");
  CountingReport rep;
  try {
    rep = text(c, "/counting/form") == "sharp" ? counting_sharp(set.grid, p) : counting_smooth(set.grid, p);
  } catch (const InvalidArgument& e) {
    throw ConfigError("/counting", e.what());
  }
  Report r;
  r.body["result"] = to_json(rep);
  r.invariants.push_back({"finite_nonnegative", std::isfinite(rep.value) && rep.value >= 0.0, "value " + fmt(rep.value)});
  return r;
}

Report run_decompose(const json& c, const Constants& k) {
  const LoadedSet set = load_set(c);
  ScaleLadder ladder{field(c, "/ladder/scales").get<std::vector<double>>()};
  try {
    ladder.validate(set.grid.side());
  } catch (const InvalidArgument& e) {
    throw ConfigError("/ladder/scales", e.what());
  }
  FormSettings s;
  s.n = static_cast<int>(integer(c, "/decompose/n"));
  s.quadrature_nodes = static_cast<std::size_t>(integer(c, "/decompose/quadrature_nodes"));
  s.budget = number(c, "/decompose/budget");
  DecompositionReport d;
  try {
    d = decompose(set.grid, ladder, number(c, "/decompose/epsilon"), s, k.decomposition());
  } catch (const InvalidArgument& e) {
    throw ConfigError("/decompose", e.what());
  }
  Report r;
  r.body["result"] = to_json(d);
  r.csv = to_csv(d);
  double worst = 0.0;
  for (const auto& row : d.rows) {
    worst = std::max(worst, std::abs(row.telescoped - row.n_zero) / std::max(1.0, std::abs(row.n_zero)));
  }
  r.invariants.push_back({"telescoping_identity", worst <= 1e-12, "max relative gap " + fmt(worst)});
  r.invariants.push_back({"structured_bound", d.structured_pass, "N^1 >= c_str density^{2^n} R^2"});
  r.invariants.push_back({"error_bound", d.error_pass, "sum " + fmt(d.error_sum) + " vs bound " + fmt(d.error_bound)});
  r.invariants.push_back({"uniform_bound", d.uniform_pass, "|N^0 - N^eps| <= C_uni eps^{1/2} R^2"});
  return r;
}

SearchSpec search_spec(const json& c) {
  SearchSpec s;
  s.x_step = number(c, "/search/x_step");
  s.angles = static_cast<std::size_t>(integer(c, "/search/angles"));
  s.eta_len = number(c, "/search/eta_len");
  s.eta_gap = number(c, "/search/eta_gap");
  s.membership_budget = number(c, "/search/membership_budget");
  s.resume_from = static_cast<std::size_t>(integer(c, "/search/resume_from"));
  return s;
}

Report run_embed(const json& c) {
  const LoadedSet set = load_set(c);
  const double eta_mem = number(c, "/embed/eta_mem");
  const PlanarSet a = set.shapes ? PlanarSet::from_shapes(*set.shapes, eta_mem) : PlanarSet::from_bitmap(set.grid, eta_mem);
  const int n = static_cast<int>(integer(c, "/embed/n"));
  const auto ratios = field(c, "/embed/ratios").get<std::vector<double>>();
  const SearchSpec spec = search_spec(c);
  Report r;
  if (text(c, "/embed/mode") == "find") {
    const double lambda = number(c, "/embed/lambda");
    std::vector<double> lengths(static_cast<std::size_t>(n), lambda);
    for (std::size_t i = 0; i < ratios.size(); ++i) lengths[i] *= ratios[i];
    const SearchResult res = find_copy(a, lengths, spec);
    r.body["result"] = to_json(res);
    const bool ok = !res.copy || verify_copy(a, *res.copy);
    r.invariants.push_back({"verify_found_copy", ok, to_string(res.status)});
  } else {
    const ScanTable t = scale_scan(a, number(c, "/embed/scan/lambda_min"), number(c, "/embed/scan/lambda_max"),
                                   static_cast<std::size_t>(integer(c, "/embed/scan/steps")), n, spec, ratios);
    r.body["result"] = to_json(t);
    r.csv = to_csv(t);
    bool ok = true;
    for (const auto& row : t.rows) ok = ok && (!row.copy || verify_copy(a, *row.copy));
    r.invariants.push_back({"verify_found_copies", ok, "every found row re-verifies"});
  }
  return r;
}

Report run_interval(const json& c, const Constants& k) {
  const LoadedSet set = load_set(c);
  PigeonholeSettings s;
  s.n = static_cast<int>(integer(c, "/interval/n"));
  s.delta = number(c, "/interval/delta");
  s.epsilon = number(c, "/interval/epsilon");
  s.J = static_cast<int>(integer(c, "/interval/J"));
  s.samples = static_cast<std::size_t>(integer(c, "/interval/samples"));
  s.quadrature_nodes = static_cast<std::size_t>(integer(c, "/interval/quadrature_nodes"));
  s.budget = number(c, "/interval/budget");
  s.constants = k.decomposition();
  s.c_J = k.c_J;
  s.search = search_spec(c);
  IntervalResult res;
  try {
    res = pigeonhole_interval(set.grid, s);
  } catch (const InvalidArgument& e) {
    throw ConfigError("/interval", e.what());
  }
  Report r;
  r.body["result"] = to_json(res);
  const bool length_ok = res.length == std::ldexp(1.0, -2 * res.j) && res.length >= std::ldexp(1.0, -2 * res.J);
  r.invariants.push_back({"interval_length", length_ok, "length " + fmt(res.length)});
  bool verified = true;
  for (const auto& w : res.witnesses) verified = verified && (!w.copy || w.verified);
  r.invariants.push_back({"witness_verification", verified, "every witness found re-verifies"});
  return r;
}

Rational rational_field(const json& c, const std::string& p) {
  const json& v = field(c, p);
  try {
    return parse_rational(v.is_string() ? v.get<std::string>() : v.dump());
  } catch (const InvalidArgument& e) {
    throw ConfigError(p, e.what());
  }
}

Report run_counterexample(const json& c) {
  const AvoidanceKind kind = avoidance_kind_from_string(text(c, "/counterexample/kind"));
  std::optional<Rational> eps;
  if (has(c, "/counterexample/epsilon")) eps = rational_field(c, "/counterexample/epsilon");
  AvoidanceResult res;
  try {
    res = avoided_distance_demo(kind, eps, rational_field(c, "/counterexample/lambda"));
  } catch (const InvalidArgument& e) {
    throw ConfigError("/counterexample", e.what());
  }
  Report r;
  r.body["result"] = to_json(res);
  return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

RunOutcome finish(const Report& r, const fs::path& out, const std::string& command, RunOutcome outcome) {
  write_file(out / (command + ".json"), dump(r.body));
  outcome.files.push_back((out / (command + ".json")).string());
  if (r.csv) {
    write_file(out / (command + ".csv"), *r.csv);
    outcome.files.push_back((out / (command + ".csv")).string());
  }
  for (const auto& inv : r.invariants) {
    if (!inv.pass) {
      outcome.exit_code = 1;
      outcome.message = InvariantFailure(inv.name, inv.detail).what();
      return outcome;
    }
  }
  outcome.exit_code = 0;
  outcome.message = command + ": ok";
  return outcome;
}

json invariants_json(const std::vector<Invariant>& list) {
  json j = json::array();
  for (const auto& inv : list) j.push_back({{"name", inv.name}, {"pass", inv.pass}, {"detail", inv.detail}});
  return j;
}

RunOutcome run_calibrate(const json& c, const RunOptions& o, const fs::path& out) {
  CalibrationOptions opt;
  opt.seed = static_cast<std::uint64_t>(integer(c, "/calibrate/seed"));
  opt.safety = number(c, "/calibrate/safety");
  opt.version = text(c, "/calibrate/version");
  std::vector<std::string> log;
  const Constants k = calibrate(opt, [&](const std::string& line) { log.push_back(line); });
  save_constants(k, o.constants_path);
  Report r;
  r.body["command"] = "calibrate";
  r.body["config"] = c;
  r.body["constants"] = to_json(k);
  r.body["log"] = log;
  r.body["provenance"] = {{"config_digest", sha256_hex(c.dump())},
                          {"constants_version", k.version},
                          {"constants_digest", sha256_hex(to_json(k).dump())}};
  RunOutcome outcome;
  outcome.digest = r.body["provenance"]["config_digest"];
  return finish(r, out, "calibrate", outcome);
}

}  // namespace

RunOutcome run(const RunOptions& o) {
  RunOutcome outcome;
  try {
    const json c = effective_config(o.command, o.config);
    validate_config(o.command, c);
    if (o.threads > 0) set_thread_count(o.threads);
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    DirLock lock(out);
    if (o.command == "calibrate") return run_calibrate(c, o, out);

    Constants k;
    try {
      k = load_constants(o.constants_path);
    } catch (const InvalidArgument& e) {
      throw ConfigError("--constants", e.what());
    }
    const std::string constants_canonical = to_json(k).dump();
    std::string inputs;
    for (const char* key : {"/set/pgm", "/set/grid"}) {
      if (has(c, key)) inputs += sha256_hex(read_file(text(c, key)));
    }
    const std::string config_digest = sha256_hex(c.dump());
    outcome.digest = sha256_hex(o.command + "\n" + c.dump() + "\n" + constants_canonical + "\n" + inputs);

    const fs::path cache = out / ".cache" / outcome.digest;
    if (o.use_cache && fs::exists(cache / "meta.json")) {
      const json meta = json::parse(read_file((cache / "meta.json").string()));
      for (const auto& name : meta.at("files")) {
        fs::copy_file(cache / name.get<std::string>(), out / name.get<std::string>(),
                      fs::copy_options::overwrite_existing);
        outcome.files.push_back((out / name.get<std::string>()).string());
      }
      outcome.exit_code = meta.at("exit_code").get<int>();
      outcome.message = meta.at("message").get<std::string>() + " (cached)";
      outcome.cache_hit = true;
      return outcome;
    }

    Report r;
    if (o.command == "identities") r = run_identities(c, k);
    else if (o.command == "counting") r = run_counting(c);
    else if (o.command == "decompose") r = run_decompose(c, k);
    else if (o.command == "embed") r = run_embed(c);
    else if (o.command == "interval") r = run_interval(c, k);
    else r = run_counterexample(c);

    json body;
    body["command"] = o.command;
    body["config"] = c;
    body["provenance"] = {{"config_digest", config_digest},
                          {"constants_version", k.version},
                          {"constants_digest", sha256_hex(constants_canonical)},
                          {"cache_key", outcome.digest}};
    for (auto it = r.body.begin(); it != r.body.end(); ++it) body[it.key()] = it.value();
    body["invariants"] = invariants_json(r.invariants);
    r.body = std::move(body);
    outcome = finish(r, out, o.command, outcome);

    if (o.use_cache) {
      fs::create_directories(cache);
      json files = json::array();
      for (const auto& f : outcome.files) {
        const fs::path name = fs::path(f).filename();
        fs::copy_file(f, cache / name, fs::copy_options::overwrite_existing);
        files.push_back(name.string());
      }
      write_file(cache / "meta.json",
                 dump({{"files", files}, {"exit_code", outcome.exit_code}, {"message", outcome.message}}));
    }
    return outcome;
  } catch (const ConfigError& e) {
    outcome.exit_code = 2;
    outcome.message = std::string("invalid configuration at ") + e.what();
  } catch (const BudgetExceeded& e) {
    outcome.exit_code = 2;
    outcome.message = std::string("budget exceeded: ") + e.what();
  } catch (const InvalidArgument& e) {
    outcome.exit_code = 2;
    outcome.message = std::string("invalid input: ") + e.what();
  } catch (const std::exception& e) {
    outcome.exit_code = 1;
    outcome.message = std::string("run failed: ") + e.what();
  }
  return outcome;
}

}  // namespace hdl::cli
