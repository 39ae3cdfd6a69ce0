#pragma once

#include <cstddef>
#include <vector>

#include "hdl/grid.hpp"
#include "hdl/sphere.hpp"

namespace hdl {

/// Weights on integer lags (kx, ky) in the box [x0, x0+width) x [y0, y0+height),
/// row-major. Lag k stands for the displacement k*h.
struct LagBox {
  long long x0 = 0;
  long long y0 = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> w;

  double operator()(long long kx, long long ky) const noexcept;
  double& at(long long kx, long long ky) noexcept {
    return w[static_cast<std::size_t>(ky - y0) * width + static_cast<std::size_t>(kx - x0)];
  }
  double total() const;
  double max_abs() const;
};

/// The measure carried by one y-slot of a multilinear form.
enum class SlotKind {
  sphere_sharp,    // sigma_lambda (M-node quadrature)
  sphere_gauss,    // sigma_lambda * g_t
  sphere_laplace,  // sigma_lambda * k_t
  origin_gauss,    // g_t
  origin_laplace,  // k_t
};

struct SlotMeasure {
  SlotKind kind = SlotKind::sphere_sharp;
  CircleQuadrature sphere{};  // radius is lambda; ignored for origin kinds
  double scale = 0.0;         // kernel scale t; ignored for sphere_sharp
};

/// Restricts the lags a weight box holds. With fold = false only lags with
/// |k_a| <= limit are kept (use N - 1 for zero-extended grids: longer lags
/// never meet the window twice). With fold = true lags are reduced mod limit
/// (periodic grids of N nodes).
struct LagWindow {
  long long limit = -1;  // negative: unrestricted
  bool fold = false;
};

LagWindow lag_window_for(const PlanarGrid& f);

/// W(k) = integral of the tent T_k(y) = prod_a max(0, 1 - |y_a/h - k_a|)
/// against the slot measure. Gaussian kernels are integrated in closed
/// form, so W is exact for any ratio of kernel scale to h. The weights of a
/// probability measure sum to 1; those of a Laplacian kernel sum to 0.
LagBox lag_weights(const SlotMeasure& slot, double resolution, const LagWindow& window = {});

/// Integral of the 1-D tent of half-width h centred at 0 against
/// phi_t(u + .), phi_t(v) = t^{-1} e^{-pi v^2/t^2}.
double tent_gauss(double u, double t, double h);

/// Same against phi_t''.
double tent_gauss_dd(double u, double t, double h);

}  // namespace hdl
