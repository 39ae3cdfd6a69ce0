#pragma once

#include <complex>
#include <string>

#include "hdl/grid.hpp"
#include "hdl/vec2.hpp"

namespace hdl {

/// The Gaussian g(x) = e^{-pi|x|^2}, its partial derivatives h1, h2 and its
/// Laplacian k, dilated as K_t(x) = t^{-2} K(x/t).
enum class KernelFamily { g, h1, h2, k };

struct KernelSpec {
  KernelFamily family = KernelFamily::g;
  double scale = 1.0;
};

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

double eval_kernel(const KernelSpec& spec, Vec2 x);

/// Closed-form transform with the e^{-2 pi i x.xi} convention:
/// g^(xi) = e^{-pi|xi|^2}, h^(l)(xi) = 2 pi i xi_l g^(xi),
/// k^(xi) = -4 pi^2 |xi|^2 g^(xi), dilated as K_t^(xi) = K^(t xi).
std::complex<double> fourier_kernel(const KernelSpec& spec, Vec2 xi);

/// Tensor trapezoid rule over [-half_width, half_width]^2 with `nodes` nodes
/// per axis.
double integrate_kernel(const KernelSpec& spec, double half_width, std::size_t nodes);

/// Kernel sampled on a periodic lattice grid, summed over all periodic images
/// that carry non-negligible mass. This is the exact periodization, so
/// spectral convolution on the torus reproduces the periodized continuous
/// convolution up to aliasing.
PlanarGrid sample_periodized(const KernelSpec& spec, double side, std::size_t node_count);

/// True when sampling at this node count keeps the aliased spectral mass
/// below `tolerance`.
bool kernel_resolved(const KernelSpec& spec, double resolution, double tolerance = 1e-12);

struct IdentityCheck {
  double residual = 0.0;        // sup over nodes of |left - right|
  double coefficient = 0.0;     // scalar in front of k_{sqrt(a^2+b^2)}
  double left_at_origin = 0.0;  // numerically convolved left side at x = 0
  bool spectral_substitute = false;  // an unresolved factor used its closed-form transform
};

/// Sum over l of h^(l)_a * h^(l)_b against (ab/(a^2+b^2)) k_{sqrt(a^2+b^2)},
/// on a periodic lattice of side R and resolution h.
IdentityCheck verify_conv_hh(double alpha, double beta, double side, double resolution);

/// k_a * g_b against (a^2/(a^2+b^2)) k_{sqrt(a^2+b^2)}.
IdentityCheck verify_conv_kg(double alpha, double beta, double side, double resolution);

/// |(g_{t+dt}(x) - g_{t-dt}(x)) / (2 dt) - k_t(x) / (2 pi t)|.
double heat_flow_check(double t, Vec2 x, double dt);

}  // namespace hdl
