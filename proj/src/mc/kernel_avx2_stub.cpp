// Linked instead of kernel_avx2.cpp when the AVX2 variant is disabled.

#include <stdexcept>

#include "kernel.hpp"

namespace atomiv::mc::detail {

void simulate_avx2(const KernelArgs&, std::uint64_t, std::uint64_t, double*) {
  throw std::logic_error("AVX2 kernel not compiled in");
}

bool avx2_compiled() { return false; }

}  // namespace atomiv::mc::detail
