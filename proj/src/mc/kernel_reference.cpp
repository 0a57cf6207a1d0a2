// Straightforward kernel on libm, used to check the polynomial kernels.
// Shares the random stream but not the elementary functions.

#include <cmath>
#include <cstdint>

#include "kernel.hpp"

namespace atomiv::mc::detail {

namespace {

double to_uniform(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t m = (static_cast<std::uint64_t>(hi) << 20) | (lo >> 12);
  return (static_cast<double>(m) + 0.5) * 0x1p-52;
}

}  // namespace

void simulate_reference(const KernelArgs& a, std::uint64_t first, std::uint64_t count, double* out) {
  const std::uint32_t key[2] = {static_cast<std::uint32_t>(a.seed), static_cast<std::uint32_t>(a.seed >> 32)};
  const double two_pi = 6.28318530717958647693;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t path = first + i;
    const std::uint64_t stream = a.antithetic ? path >> 1 : path;
    const double sign = a.antithetic && (path & 1) ? -1.0 : 1.0;
    double s = a.s0;
    for (std::uint32_t step = 0; step < a.n_steps && s > 0.0; ++step) {
      const std::uint32_t counter[4] = {static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                                        step, 0};
      std::uint32_t w[4];
      philox4x32_10(counter, key, w);
      const double z = sign * std::sqrt(-2.0 * std::log(to_uniform(w[0], w[1]))) * std::cos(two_pi * to_uniform(w[2], w[3]));
      const double next = s + a.sigma * a.sqrt_dt * std::pow(s, a.rho) * z;
      s = next > 0.0 ? next : 0.0;
    }
    out[i] = s;
  }
}

}  // namespace atomiv::mc::detail
