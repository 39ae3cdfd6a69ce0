#pragma once

#include <string>

#include <json.hpp>

#include "hdl/decomposition.hpp"

namespace hdl {

/// Empirical constants behind the "up to a constant" statements, frozen by
/// calibration and read back by every regression run.
struct Constants {
  std::string version;
  double c_ball = 0.0;        // min of sigma * g_1 over B_2(0)
  double c_decay = 0.0;       // sup |sigma^(xi)| |xi|^{1/2}, |xi| in [10, 100]
  double c_domination = 0.0;  // Gaussian domination constant
  double c_gcs = 0.0;         // lower constant of the Gowers-Cauchy-Schwarz corollary
  double c_str = 0.0;
  double c_err = 0.0;
  double c_uni = 0.0;
  double c_J = 0.0;           // J <= c_J delta^{-(3n+1) 2^{n+1}}
  nlohmann::json settings = nlohmann::json::object();  // what produced the values

  DecompositionConstants decomposition() const { return {c_str, c_err, c_uni}; }
};

nlohmann::json to_json(const Constants& c);
/// Throws InvalidArgument naming a missing or non-positive field.
Constants constants_from_json(const nlohmann::json& j);
Constants load_constants(const std::string& path);
void save_constants(const Constants& c, const std::string& path);

}  // namespace hdl
