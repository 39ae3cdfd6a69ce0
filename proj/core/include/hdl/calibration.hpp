#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "hdl/constants.hpp"

namespace hdl {

// Sweeps behind each frozen constant. Lower constants are the sweep minimum,
// upper constants the sweep maximum; calibrate() applies the safety factor.

double sweep_c_ball();
double sweep_c_decay();
double sweep_c_domination();
/// Minimum U^2 ratio of the cube-supported lower bound over `count` random grids.
double sweep_c_gcs(std::uint64_t seed, std::size_t count);
/// Minimum structured ratio over `count` random sets, n in {1, 2},
/// lambda in {1, 2, 4}.
double sweep_c_str(std::uint64_t seed, std::size_t count);
/// Maximum of sum_j |N^eps - N^1| / (eps^{-3n} log(1/eps) R^2).
double sweep_c_err(std::uint64_t seed);
/// Maximum of |N^0 - N^eps| / (eps^{1/2} R^2), eps = 2^{-1}, ..., 2^{-6}.
double sweep_c_uni(std::uint64_t seed);
/// Maximum over n in {1, 2, 3} and delta = 2^{-k}, k = 0..8, of
/// J_theory / delta^{-(3n+1) 2^{n+1}} for the given decomposition constants.
double sweep_c_J(const DecompositionConstants& c);

struct CalibrationOptions {
  std::uint64_t seed = 271828;
  double safety = 2.0;  // lower constants divided by it, upper multiplied
  std::string version = "1";
};

using CalibrationLog = std::function<void(const std::string&)>;

Constants calibrate(const CalibrationOptions& options = {}, const CalibrationLog& log = {});

}  // namespace hdl
