#include "hdl/gaussian.hpp"

#include <cmath>
#include <vector>

#include "hdl/errors.hpp"
#include "hdl/fft.hpp"
#include "hdl/numeric.hpp"

namespace hdl {
namespace {

using Complex = std::complex<double>;

void check_scale(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("kernel scale must be > 0");
}

// Images farther than this many scales carry less than e^{-36 pi} relative
// weight.
constexpr double kImageReach = 6.0;

// Spectral side of a periodized kernel at the lattice frequencies: the DFT of
// the sampled kernel when it is resolved, the closed form otherwise.
std::vector<Complex> kernel_spectrum(const KernelSpec& spec, double side, std::size_t n,
                                     bool& substituted) {
  const double h = side / static_cast<double>(n);
  std::vector<Complex> out(n * n);
  if (kernel_resolved(spec, h)) {
    const SpectrumGrid s = dft(sample_periodized(spec, side, n));
    return s.coefficients;
  }
  substituted = true;
  SpectrumGrid layout{side, n, BoundaryMode::periodic, Placement::lattice, {}};
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < n; ++p) {
      const Vec2 xi{static_cast<double>(layout.signed_index(p)) / side,
                    static_cast<double>(layout.signed_index(q)) / side};
      out[q * n + p] = fourier_kernel(spec, xi);
    }
  }
  return out;
}

IdentityCheck compare(const std::vector<Complex>& left_spectrum, const KernelSpec& right,
                      double coefficient, double side, std::size_t n, bool substituted) {
  SpectrumGrid s{side, n, BoundaryMode::periodic, Placement::lattice, left_spectrum};
  const PlanarGrid left = idft(s);
  const PlanarGrid rhs = sample_periodized(right, side, n);
  IdentityCheck out;
  out.coefficient = coefficient;
  out.spectral_substitute = substituted;
  out.left_at_origin = left(0, 0);
  for (std::size_t k = 0; k < n * n; ++k) {
    out.residual = std::max(out.residual, std::abs(left.values()[k] - coefficient * rhs.values()[k]));
  }
  return out;
}

std::size_t probe_nodes(double alpha, double beta, double side, double resolution) {
  check_scale(alpha);
  check_scale(beta);
  const std::size_t n = PlanarGrid::node_count_for(side, resolution);
  const double widest = std::hypot(alpha, beta);
  if (side < 2.0 * widest) {
    throw InvalidArgument("identity probe: window side R must be at least 2 sqrt(a^2+b^2)");
  }
  if (!kernel_resolved({KernelFamily::k, widest}, side / static_cast<double>(n))) {
    throw InvalidArgument("identity probe: resolution too coarse for the right-hand kernel");
  }
  return n;
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::g: return "g";
    case KernelFamily::h1: return "h1";
    case KernelFamily::h2: return "h2";
    case KernelFamily::k: return "k";
  }
  return "?";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "g") return KernelFamily::g;
  if (name == "h1") return KernelFamily::h1;
  if (name == "h2") return KernelFamily::h2;
  if (name == "k") return KernelFamily::k;
  throw InvalidArgument("unknown kernel family '" + name + "'");
}

double eval_kernel(const KernelSpec& spec, Vec2 x) {
  check_scale(spec.scale);
  const double t = spec.scale;
  const Vec2 u = (1.0 / t) * x;
  const double r2 = norm2(u);
  const double e = std::exp(-kPi * r2);  // underflows cleanly to 0 in the far tail
  const double pre = 1.0 / (t * t);
  switch (spec.family) {
    case KernelFamily::g: return pre * e;
    case KernelFamily::h1: return pre * (-2.0 * kPi * u.x) * e;
    case KernelFamily::h2: return pre * (-2.0 * kPi * u.y) * e;
    case KernelFamily::k: return pre * (4.0 * kPi * kPi * r2 - 4.0 * kPi) * e;
  }
  return 0.0;
}

std::complex<double> fourier_kernel(const KernelSpec& spec, Vec2 xi) {
  check_scale(spec.scale);
  const Vec2 w = spec.scale * xi;
  const double e = std::exp(-kPi * norm2(w));
  switch (spec.family) {
    case KernelFamily::g: return {e, 0.0};
    case KernelFamily::h1: return {0.0, 2.0 * kPi * w.x * e};
    case KernelFamily::h2: return {0.0, 2.0 * kPi * w.y * e};
    case KernelFamily::k: return {-4.0 * kPi * kPi * norm2(w) * e, 0.0};
  }
  return {};
}

double integrate_kernel(const KernelSpec& spec, double half_width, std::size_t nodes) {
  if (nodes < 3) throw InvalidArgument("integrate_kernel: need at least 3 nodes per axis");
  const double step = 2.0 * half_width / static_cast<double>(nodes - 1);
  std::vector<double> terms;
  terms.reserve(nodes * nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double wy = (j == 0 || j + 1 == nodes) ? 0.5 : 1.0;
    for (std::size_t i = 0; i < nodes; ++i) {
      const double wx = (i == 0 || i + 1 == nodes) ? 0.5 : 1.0;
      const Vec2 p{-half_width + static_cast<double>(i) * step,
                   -half_width + static_cast<double>(j) * step};
      terms.push_back(wx * wy * eval_kernel(spec, p));
    }
  }
  return step * step * pairwise_sum(terms);
}

PlanarGrid sample_periodized(const KernelSpec& spec, double side, std::size_t node_count) {
  check_scale(spec.scale);
  PlanarGrid g(side, node_count, BoundaryMode::periodic, Placement::lattice);
  const auto reach = static_cast<long long>(std::ceil(kImageReach * spec.scale / side)) + 1;
  fill(g, [&](Vec2 x) {
    double sum = 0.0;
    for (long long b = -reach; b <= reach; ++b) {
      for (long long a = -reach; a <= reach; ++a) {
        sum += eval_kernel(spec, x + Vec2{static_cast<double>(a) * side, static_cast<double>(b) * side});
      }
    }
    return sum;
  });
  return g;
}

bool kernel_resolved(const KernelSpec& spec, double resolution, double tolerance) {
  // Relative spectral size at the Nyquist frequency 1/(2h).
  const double nyquist = spec.scale / (2.0 * resolution);
  return std::exp(-kPi * nyquist * nyquist) * (1.0 + 4.0 * kPi * kPi * nyquist * nyquist) < tolerance;
}

IdentityCheck verify_conv_hh(double alpha, double beta, double side, double resolution) {
  const std::size_t n = probe_nodes(alpha, beta, side, resolution);
  bool substituted = false;
  std::vector<Complex> left(n * n, Complex{});
  for (KernelFamily fam : {KernelFamily::h1, KernelFamily::h2}) {
    const auto a = kernel_spectrum({fam, alpha}, side, n, substituted);
    const auto b = kernel_spectrum({fam, beta}, side, n, substituted);
    for (std::size_t k = 0; k < n * n; ++k) left[k] += a[k] * b[k];
  }
  const double c = alpha * beta / (alpha * alpha + beta * beta);
  return compare(left, {KernelFamily::k, std::hypot(alpha, beta)}, c, side, n, substituted);
}

IdentityCheck verify_conv_kg(double alpha, double beta, double side, double resolution) {
  const std::size_t n = probe_nodes(alpha, beta, side, resolution);
  bool substituted = false;
  auto left = kernel_spectrum({KernelFamily::k, alpha}, side, n, substituted);
  const auto b = kernel_spectrum({KernelFamily::g, beta}, side, n, substituted);
  for (std::size_t k = 0; k < n * n; ++k) left[k] *= b[k];
  const double c = alpha * alpha / (alpha * alpha + beta * beta);
  return compare(left, {KernelFamily::k, std::hypot(alpha, beta)}, c, side, n, substituted);
}

double heat_flow_check(double t, Vec2 x, double dt) {
  check_scale(t);
  if (!(dt > 0.0) || !(dt < t / 10.0)) throw InvalidArgument("heat_flow_check: need 0 < dt < t/10");
  const double fd =
      (eval_kernel({KernelFamily::g, t + dt}, x) - eval_kernel({KernelFamily::g, t - dt}, x)) /
      (2.0 * dt);
  return std::abs(fd - eval_kernel({KernelFamily::k, t}, x) / (2.0 * kPi * t));
}

}  // namespace hdl
