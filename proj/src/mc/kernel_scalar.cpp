#include <bit>
#include <cmath>
#include <cstdint>

#include "kernel_generic.hpp"

namespace atomiv::mc::detail {

namespace {

struct ScalarBackend {
  using D = double;
  using U = std::uint64_t;
  using M = bool;
  static constexpr std::uint64_t width = 1;

  static D set(double x) { return x; }
  static U setu(std::uint64_t x) { return x; }
  static D add(D a, D b) { return a + b; }
  static D sub(D a, D b) { return a - b; }
  static D mul(D a, D b) { return a * b; }
  static D div(D a, D b) { return a / b; }
  static D sqrt(D a) { return std::sqrt(a); }
  // Same operand convention as maxpd/minpd.
  static D max(D a, D b) { return a > b ? a : b; }
  static D min(D a, D b) { return a < b ? a : b; }
  static M gt(D a, D b) { return a > b; }
  static M mask_and(M a, M b) { return a && b; }
  static bool any(M m) { return m; }
  static D select(M m, D a, D b) { return m ? a : b; }
  static U uand(U a, U b) { return a & b; }
  static U uor(U a, U b) { return a | b; }
  static U uxor(U a, U b) { return a ^ b; }
  static M ueq(U a, U b) { return a == b; }
  template <int N>
  static U shl(U a) {
    return a << N;
  }
  template <int N>
  static U shr(U a) {
    return a >> N;
  }
  static U mul32(U a, U b) { return (a & 0xffffffffull) * (b & 0xffffffffull); }
  static D as_double(U a) { return std::bit_cast<double>(a); }
  static U as_bits(D a) { return std::bit_cast<std::uint64_t>(a); }
  static U lane_index(std::uint64_t first) { return first; }
  static void store(double* out, D v, std::uint64_t) { *out = v; }
};

}  // namespace

void simulate_scalar(const KernelArgs& args, std::uint64_t first, std::uint64_t count, double* out) {
  simulate_paths<ScalarBackend>(args, first, count, out);
}

void philox4x32_10(const std::uint32_t counter[4], const std::uint32_t key[2], std::uint32_t out[4]) {
  const auto w = philox<ScalarBackend>({counter[0], counter[1], counter[2], counter[3]}, key[0], key[1]);
  out[0] = static_cast<std::uint32_t>(w.w0);
  out[1] = static_cast<std::uint32_t>(w.w1);
  out[2] = static_cast<std::uint32_t>(w.w2);
  out[3] = static_cast<std::uint32_t>(w.w3);
}

}  // namespace atomiv::mc::detail
