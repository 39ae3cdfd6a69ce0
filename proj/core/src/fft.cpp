#include "hdl/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "hdl/errors.hpp"
#include "hdl/numeric.hpp"

namespace hdl::fft {
namespace {

enum class Kind { r2c, c2r, c2c_forward, c2c_backward };

std::mutex g_plan_mutex;

// Plans live for the whole process; FFTW owns them.
fftw_plan plan_for(std::size_t p, Kind kind) {
  static std::map<std::tuple<std::size_t, Kind>, fftw_plan> plans;
  std::lock_guard lock(g_plan_mutex);
  auto key = std::make_tuple(p, kind);
  if (auto it = plans.find(key); it != plans.end()) return it->second;

  const int n = static_cast<int>(p);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::vector<double> real(p * p);
  std::vector<Complex> cplx(p * p);
  auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
  fftw_plan plan = nullptr;
  switch (kind) {
    case Kind::r2c:
      plan = fftw_plan_dft_r2c_2d(n, n, real.data(), c, flags);
      break;
    case Kind::c2r:
      plan = fftw_plan_dft_c2r_2d(n, n, c, real.data(), flags);
      break;
    case Kind::c2c_forward:
      plan = fftw_plan_dft_2d(n, n, c, c, FFTW_FORWARD, flags);
      break;
    case Kind::c2c_backward:
      plan = fftw_plan_dft_2d(n, n, c, c, FFTW_BACKWARD, flags);
      break;
  }
  if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
  plans.emplace(key, plan);
  return plan;
}

void check_size(std::size_t p, std::size_t have, std::size_t want, const char* what) {
  if (p < 2 || !is_power_of_two(p)) throw InvalidArgument("fft: side must be a power of two >= 2");
  if (have != want) throw InvalidArgument(std::string("fft: buffer size mismatch in ") + what);
}

}  // namespace

void r2c(std::size_t p, std::span<const double> in, std::span<Complex> out) {
  check_size(p, in.size(), p * p, "r2c input");
  check_size(p, out.size(), p * half_width(p), "r2c output");
  fftw_plan plan = plan_for(p, Kind::r2c);
  // FFTW does not modify the input of an out-of-place r2c transform.
  fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void c2r(std::size_t p, std::span<const Complex> in, std::span<double> out) {
  check_size(p, in.size(), p * half_width(p), "c2r input");
  check_size(p, out.size(), p * p, "c2r output");
  fftw_plan plan = plan_for(p, Kind::c2r);
  std::vector<Complex> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

void c2c(std::size_t p, std::span<Complex> data, int sign) {
  check_size(p, data.size(), p * p, "c2c");
  fftw_plan plan = plan_for(p, sign < 0 ? Kind::c2c_forward : Kind::c2c_backward);
  auto* d = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, d, d);
}

}  // namespace hdl::fft
