#include <algorithm>
#include <cmath>

#include "config_access.hpp"
#include "hdl/errors.hpp"
#include "hdl/grid.hpp"

namespace hdl::cli {

bool has(const json& config, const std::string& pointer) {
  const json::json_pointer p(pointer);
  return config.contains(p) && !config.at(p).is_null();
}

const json& field(const json& config, const std::string& pointer) {
  const json::json_pointer p(pointer);
  if (!config.contains(p)) throw ConfigError(pointer, "missing field");
  return config.at(p);
}

double number(const json& config, const std::string& pointer) {
  const json& v = field(config, pointer);
  if (!v.is_number()) throw ConfigError(pointer, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(pointer, "expected a finite number");
  return x;
}

long long integer(const json& config, const std::string& pointer) {
  const json& v = field(config, pointer);
  if (!v.is_number_integer()) throw ConfigError(pointer, "expected an integer");
  return v.get<long long>();
}

std::string text(const json& config, const std::string& pointer) {
  const json& v = field(config, pointer);
  if (!v.is_string()) throw ConfigError(pointer, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& config, const std::string& pointer) {
  const json& v = field(config, pointer);
  if (!v.is_boolean()) throw ConfigError(pointer, "expected true or false");
  return v.get<bool>();
}

namespace {

json shapes_set(double side, double h, json shapes) {
  return {{"R", side}, {"h", h}, {"boundary", "zero"}, {"shapes", std::move(shapes)}};
}

json counting_defaults() {
  return {{"form", "sharp"},
          {"n", 1},
          {"lambda", 1.5},
          {"epsilon", 1.0},
          {"quadrature_nodes", 256},
          {"phase", 0.0},
          {"estimator", "exact_quadrature"},
          {"mc_samples", 100000},
          {"seed", nullptr},
          {"budget", 2e12}};
}

json search_defaults() {
  return {{"x_step", 0.0}, {"angles", 0}, {"eta_len", 0.0}, {"eta_gap", 0.0}, {"membership_budget", 4e9},
          {"resume_from", 0}};
}

void merge(json& base, const json& over) {
  for (auto it = over.begin(); it != over.end(); ++it) {
    if (it.value().is_object() && base.contains(it.key()) && base[it.key()].is_object()) {
      merge(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

void validate_set(const json& c) {
  const json& set = field(c, "/set");
  require(set.is_object(), "/set", "expected an object");
  const int kinds = static_cast<int>(set.contains("shapes")) + static_cast<int>(set.contains("pgm")) +
                    static_cast<int>(set.contains("random_mask")) + static_cast<int>(set.contains("grid"));
  require(kinds == 1, "/set", "give exactly one of shapes, pgm, random_mask or grid");
  const auto check_window = [&](const std::string& base) {
    const double side = number(c, base + "/R");
    const double h = number(c, base + "/h");
    require(side > 0.0, base + "/R", "must be positive");
    require(h > 0.0, base + "/h", "must be positive");
    try {
      (void)PlanarGrid::node_count_for(side, h);
    } catch (const InvalidArgument& e) {
      throw ConfigError(base + "/h", e.what());
    }
  };
  if (set.contains("shapes")) {
    check_window("/set");
    require(set.at("shapes").is_array(), "/set/shapes", "expected an array");
    if (set.contains("boundary")) {
      const std::string b = text(c, "/set/boundary");
      require(b == "zero" || b == "periodic", "/set/boundary", "expected \"zero\" or \"periodic\"");
    }
  } else if (set.contains("pgm")) {
    (void)text(c, "/set/pgm");
    require(number(c, "/set/R") > 0.0, "/set/R", "must be positive");
  } else if (set.contains("grid")) {
    (void)text(c, "/set/grid");
  } else {
    check_window("/set/random_mask");
    const double d = number(c, "/set/random_mask/density");
    require(d >= 0.0 && d <= 1.0, "/set/random_mask/density", "must satisfy 0 <= density <= 1");
    require(integer(c, "/set/random_mask/seed") >= 0, "/set/random_mask/seed", "must be >= 0");
  }
}

void validate_n(const json& c, const std::string& p) {
  const long long n = integer(c, p);
  require(n >= 1 && n <= 3, p, "must satisfy 1 <= n <= 3");
}

void validate_epsilon(const json& c, const std::string& p) {
  const double e = number(c, p);
  require(e > 0.0 && e <= 1.0, p, "must satisfy 0 < epsilon <= 1");
}

void validate_quadrature(const json& c, const std::string& base) {
  const long long m = integer(c, base + "/quadrature_nodes");
  require(m >= 4, base + "/quadrature_nodes", "must be >= 4");
  require(number(c, base + "/budget") > 0.0, base + "/budget", "must be positive");
}

void validate_search(const json& c) {
  require(number(c, "/search/x_step") >= 0.0, "/search/x_step", "must be >= 0 (0 selects the default)");
  require(integer(c, "/search/angles") >= 0, "/search/angles", "must be >= 0 (0 selects the default)");
  require(number(c, "/search/eta_len") >= 0.0, "/search/eta_len", "must be >= 0");
  require(number(c, "/search/eta_gap") >= 0.0, "/search/eta_gap", "must be >= 0");
  require(number(c, "/search/membership_budget") > 0.0, "/search/membership_budget", "must be positive");
  require(integer(c, "/search/resume_from") >= 0, "/search/resume_from", "must be >= 0");
}

void validate_rational(const json& c, const std::string& p) {
  const json& v = field(c, p);
  require(v.is_string() || v.is_number(), p, "expected a decimal string, a fraction string or a number");
}

}  // namespace

json default_config(const std::string& command) {
  json c;
  c["command"] = command;
  if (command == "identities") {
    c["identities"] = {{"pairs", 10},
                       {"seed", 12345},
                       {"R", 16.0},
                       {"h", 0.03125},
                       {"alpha_range", {0.5, 4.0}},
                       {"threshold", 1e-6},
                       {"heat", {{"t", 1.0}, {"x", {0.3, 0.2}}, {"dt", 1e-3}, {"threshold", 1e-5}}}};
  } else if (command == "counting") {
    c["set"] = shapes_set(8.0, 0.03125, json::array({{{"type", "disk"}, {"center", {4.0, 4.0}}, {"radius", 2.0}}}));
    c["counting"] = counting_defaults();
  } else if (command == "decompose") {
    c["set"] = shapes_set(8.0, 0.0625, json::array({{{"type", "rect"}, {"lo", {0.0, 0.0}}, {"hi", {8.0, 8.0}}}}));
    c["ladder"] = {{"scales", {0.5, 1.0, 2.0}}};
    c["decompose"] = {{"n", 1}, {"epsilon", 0.25}, {"quadrature_nodes", 256}, {"budget", 2e12}};
  } else if (command == "embed") {
    c["set"] = shapes_set(4.0, 0.0625, json::array({{{"type", "rect"}, {"lo", {0.0, 0.0}}, {"hi", {4.0, 4.0}}}}));
    c["embed"] = {{"mode", "find"},
                  {"n", 2},
                  {"lambda", 1.0},
                  {"ratios", json::array()},
                  {"eta_mem", 0.0},
                  {"scan", {{"lambda_min", 0.5}, {"lambda_max", 2.0}, {"steps", 4}}}};
    c["search"] = search_defaults();
  } else if (command == "interval") {
    c["set"] = {{"random_mask", {{"R", 1.0}, {"h", 1.0 / 256.0}, {"density", 0.5}, {"seed", 1}, {"boundary", "zero"}}}};
    c["interval"] = {{"n", 1}, {"delta", 0.45}, {"epsilon", 0.5}, {"J", 3}, {"samples", 5},
                     {"quadrature_nodes", 256}, {"budget", 2e12}};
    c["search"] = search_defaults();
  } else if (command == "counterexample") {
    c["counterexample"] = {{"kind", "banach_Z"}, {"epsilon", nullptr}, {"lambda", "0.5"}};
  } else if (command == "calibrate") {
    c["calibrate"] = {{"seed", 271828}, {"safety", 2.0}, {"version", "1"}};
  } else {
    throw ConfigError("/command", "unknown command '" + command + "'");
  }
  return c;
}

json effective_config(const std::string& command, const json& user) {
  if (!user.is_object()) throw ConfigError("", "configuration must be a JSON object");
  if (user.contains("command")) {
    require(user.at("command").is_string() && user.at("command").get<std::string>() == command, "/command",
            "does not match the subcommand '" + command + "'");
  }
  json c = default_config(command);
  // A user-supplied set replaces the default set entirely.
  if (user.contains("set")) c.erase("set");
  merge(c, user);
  return c;
}

void validate_config(const std::string& command, const json& c) {
  if (command == "identities") {
    require(integer(c, "/identities/pairs") >= 1, "/identities/pairs", "must be >= 1");
    require(integer(c, "/identities/seed") >= 0, "/identities/seed", "must be >= 0");
    require(number(c, "/identities/R") > 0.0, "/identities/R", "must be positive");
    require(number(c, "/identities/h") > 0.0, "/identities/h", "must be positive");
    const double lo = number(c, "/identities/alpha_range/0"), hi = number(c, "/identities/alpha_range/1");
    require(lo > 0.0 && hi >= lo, "/identities/alpha_range", "need 0 < lo <= hi");
    require(number(c, "/identities/threshold") > 0.0, "/identities/threshold", "must be positive");
    const double t = number(c, "/identities/heat/t"), dt = number(c, "/identities/heat/dt");
    require(t > 0.0, "/identities/heat/t", "must be positive");
    require(dt > 0.0 && dt < t / 10.0, "/identities/heat/dt", "must satisfy 0 < dt < t/10");
    (void)number(c, "/identities/heat/x/0");
    (void)number(c, "/identities/heat/x/1");
    require(number(c, "/identities/heat/threshold") > 0.0, "/identities/heat/threshold", "must be positive");
  } else if (command == "counting") {
    validate_set(c);
    const std::string form = text(c, "/counting/form");
    require(form == "sharp" || form == "smooth", "/counting/form", "expected \"sharp\" or \"smooth\"");
    validate_n(c, "/counting/n");
    require(number(c, "/counting/lambda") > 0.0, "/counting/lambda", "must be positive");
    validate_epsilon(c, "/counting/epsilon");
    validate_quadrature(c, "/counting");
    (void)number(c, "/counting/phase");
    const std::string est = text(c, "/counting/estimator");
    require(est == "exact_quadrature" || est == "monte_carlo", "/counting/estimator",
            "expected \"exact_quadrature\" or \"monte_carlo\"");
    require(integer(c, "/counting/mc_samples") >= 2, "/counting/mc_samples", "must be >= 2");
    if (est == "monte_carlo") {
      require(has(c, "/counting/seed"), "/counting/seed", "the monte_carlo estimator needs a seed");
    }
    if (has(c, "/counting/seed")) require(integer(c, "/counting/seed") >= 0, "/counting/seed", "must be >= 0");
  } else if (command == "decompose") {
    validate_set(c);
    const json& scales = field(c, "/ladder/scales");
    require(scales.is_array() && !scales.empty(), "/ladder/scales", "expected a non-empty array");
    for (std::size_t i = 0; i < scales.size(); ++i) {
      require(number(c, "/ladder/scales/" + std::to_string(i)) > 0.0, "/ladder/scales/" + std::to_string(i),
              "must be positive");
    }
    validate_n(c, "/decompose/n");
    validate_epsilon(c, "/decompose/epsilon");
    validate_quadrature(c, "/decompose");
  } else if (command == "embed") {
    validate_set(c);
    const std::string mode = text(c, "/embed/mode");
    require(mode == "find" || mode == "scan", "/embed/mode", "expected \"find\" or \"scan\"");
    validate_n(c, "/embed/n");
    const auto n = static_cast<std::size_t>(integer(c, "/embed/n"));
    require(number(c, "/embed/lambda") > 0.0, "/embed/lambda", "must be positive");
    const json& ratios = field(c, "/embed/ratios");
    require(ratios.is_array() && (ratios.empty() || ratios.size() == n), "/embed/ratios",
            "expected an empty array or one ratio per edge");
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      require(number(c, "/embed/ratios/" + std::to_string(i)) > 0.0, "/embed/ratios/" + std::to_string(i),
              "must be positive");
    }
    require(number(c, "/embed/eta_mem") >= 0.0, "/embed/eta_mem", "must be >= 0");
    const double lo = number(c, "/embed/scan/lambda_min"), hi = number(c, "/embed/scan/lambda_max");
    require(lo > 0.0 && hi >= lo, "/embed/scan", "need 0 < lambda_min <= lambda_max");
    require(integer(c, "/embed/scan/steps") >= 1, "/embed/scan/steps", "must be >= 1");
    validate_search(c);
  } else if (command == "interval") {
    validate_set(c);
    validate_n(c, "/interval/n");
    const double delta = number(c, "/interval/delta");
    require(delta > 0.0 && delta <= 1.0, "/interval/delta", "must satisfy 0 < delta <= 1");
    const double eps = number(c, "/interval/epsilon");
    require(eps > 0.0 && eps < 1.0, "/interval/epsilon", "must satisfy 0 < epsilon < 1");
    require(integer(c, "/interval/J") >= 1, "/interval/J", "must be >= 1");
    require(integer(c, "/interval/samples") >= 1, "/interval/samples", "must be >= 1");
    validate_quadrature(c, "/interval");
    validate_search(c);
  } else if (command == "counterexample") {
    const std::string kind = text(c, "/counterexample/kind");
    require(kind == "banach_Z" || kind == "stripes", "/counterexample/kind", "expected \"banach_Z\" or \"stripes\"");
    validate_rational(c, "/counterexample/lambda");
    if (kind == "stripes") {
      require(has(c, "/counterexample/epsilon"), "/counterexample/epsilon", "stripes needs epsilon");
      validate_rational(c, "/counterexample/epsilon");
    } else {
      require(!has(c, "/counterexample/epsilon"), "/counterexample/epsilon", "banach_Z takes no epsilon");
    }
  } else if (command == "calibrate") {
    require(integer(c, "/calibrate/seed") >= 0, "/calibrate/seed", "must be >= 0");
    require(number(c, "/calibrate/safety") >= 1.0, "/calibrate/safety", "must be >= 1");
    (void)text(c, "/calibrate/version");
  } else {
    throw ConfigError("/command", "unknown command '" + command + "'");
  }
}

}  // namespace hdl::cli
