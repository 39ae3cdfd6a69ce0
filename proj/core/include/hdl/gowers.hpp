#pragma once

#include "hdl/grid.hpp"
#include "hdl/shapes.hpp"

namespace hdl {

/// Gowers uniformity norm U^n (1 <= n <= 3) of a nonnegative grid function
/// through the recursion U^1(f)^2 = (int f)^2,
/// U^n(f)^{2^n} = int U^{n-1}(f f(.+k))^{2^{n-1}} dk, the k-integral over
/// grid lags and the innermost U^2 powers computed spectrally.
double gowers_norm(const PlanarGrid& f, int n);

/// U^2(f)^4 by the recursion with every inner integral a direct sum, O(N^4).
double gowers_u2_power_direct(const PlanarGrid& f);
/// U^2(f)^4 as the integral of the squared autocorrelation, the
/// autocorrelation computed by FFT.
double gowers_u2_power_autocorrelation(const PlanarGrid& f);
/// U^2(f)^4 as the integral of |f^|^4 over the (padded) frequency lattice.
double gowers_u2_power_fourier(const PlanarGrid& f);

struct GcsBound {
  double lhs = 0.0;    // U^n(f)
  double rhs = 0.0;    // |Q|^{-1 + (n+1)/2^n} int f
  double ratio = 0.0;  // lhs / rhs
};

/// Both sides of the cube-supported lower bound for U^n. Throws when a
/// nonzero node lies outside the cube.
GcsBound gowers_cs_bound(const PlanarGrid& f, const Box& cube, int n);

/// (n+1)^{-2(n+1)(1 - 2^{-n})}: the constant the Cauchy-Schwarz argument
/// yields for the cube bound.
double gcs_theoretical_constant(int n);

}  // namespace hdl
