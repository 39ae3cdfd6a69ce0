#pragma once

#include <array>
#include <span>
#include <vector>

#include "hdl/grid.hpp"
#include "hdl/lag_weights.hpp"

namespace hdl {

using Lag = std::array<long long, 2>;

/// G(k_1, ..., k_n) = h^2 sum_x prod_{r in {0,1}^n} f(x + r_1 k_1 + ... + r_n k_n)
/// over grid nodes x and integer lags k_i. Reads outside the window are 0 in
/// zero-extended mode and wrap in periodic mode.
double lattice_product_sum(const PlanarGrid& f, std::span<const Lag> lags);

/// One multilinear form: sum over lag tuples of G(k) prod_i W_i(k_i). The
/// pointed-to weight boxes must outlive the evaluation.
struct FormConfig {
  std::vector<const LagBox*> slots;
};

struct EngineOptions {
  double budget = 2e12;  // estimated floating point operations
  double prune = 1e-18;  // outer weights below prune * max are skipped
};

/// Upper estimate of the work evaluate_forms would do.
double estimate_form_cost(const PlanarGrid& f, const std::vector<FormConfig>& configs,
                          const EngineOptions& options = {});

/// Evaluates every configuration. All configurations must have the same
/// number of slots (1 to 4). Outer lag tuples are shared across the batch:
/// each tuple costs one FFT of the product grid F_{n-1}, after which every
/// configuration needs one dot product against its last-slot spectrum.
/// Deterministic for any thread count.
std::vector<double> evaluate_forms(const PlanarGrid& f, const std::vector<FormConfig>& configs,
                                   const EngineOptions& options = {});

}  // namespace hdl
