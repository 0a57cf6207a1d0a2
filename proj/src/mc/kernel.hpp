#pragma once

#include <cstdint>

namespace atomiv::mc::detail {

struct KernelArgs {
  double s0;
  double sigma;
  double rho;
  double sqrt_dt;
  std::uint32_t n_steps;
  std::uint64_t seed;
  bool antithetic;
};

// Each writes the terminal values of paths [first, first + count) to out[0..count).
void simulate_scalar(const KernelArgs& args, std::uint64_t first, std::uint64_t count, double* out);
void simulate_avx2(const KernelArgs& args, std::uint64_t first, std::uint64_t count, double* out);
void simulate_reference(const KernelArgs& args, std::uint64_t first, std::uint64_t count, double* out);

bool avx2_compiled();

// Philox4x32-10 on one counter block, exposed for known-answer tests.
void philox4x32_10(const std::uint32_t counter[4], const std::uint32_t key[2], std::uint32_t out[4]);

}  // namespace atomiv::mc::detail
