#pragma once

#include <cmath>
#include <cstdint>

#include "hdl/numeric.hpp"

namespace hdl {

/// Counter-based generator: every draw is a pure function of
/// (seed, sample index, draw index), so Monte Carlo samples can be produced
/// in any order or on any thread.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t sample) noexcept
      : key_(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix(sample + 0x632be59bd9b4e019ULL)) {}

  std::uint64_t next_u64() noexcept { return mix(key_ + 0xbf58476d1ce4e5b9ULL * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; one value per call.
  double normal() noexcept {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  std::uint64_t below(std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) % bound;
  }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hdl
