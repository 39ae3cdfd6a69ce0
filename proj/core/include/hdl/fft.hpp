#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace hdl::fft {

using Complex = std::complex<double>;

/// Square 2-D transforms of side p on row-major data. Forward transforms use
/// the e^{-2 pi i k x / p} kernel; no transform is normalized.
/// Plans are created once per size and shared; execution is thread-safe.

/// Real input p*p -> half spectrum p*(p/2+1).
void r2c(std::size_t p, std::span<const double> in, std::span<Complex> out);

/// Half spectrum p*(p/2+1) -> real output p*p (unnormalized inverse).
void c2r(std::size_t p, std::span<const Complex> in, std::span<double> out);

/// In-place complex transform; sign = -1 forward, +1 backward.
void c2c(std::size_t p, std::span<Complex> data, int sign);

inline std::size_t half_width(std::size_t p) { return p / 2 + 1; }

}  // namespace hdl::fft
