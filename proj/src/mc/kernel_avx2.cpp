// Compiled with -mavx2 only; reached through runtime dispatch.

#include <immintrin.h>

#include <cstdint>

#include "kernel_generic.hpp"

namespace atomiv::mc::detail {

namespace {

struct Avx2Backend {
  using D = __m256d;
  using U = __m256i;
  using M = __m256d;
  static constexpr std::uint64_t width = 4;

  static D set(double x) { return _mm256_set1_pd(x); }
  static U setu(std::uint64_t x) { return _mm256_set1_epi64x(static_cast<long long>(x)); }
  static D add(D a, D b) { return _mm256_add_pd(a, b); }
  static D sub(D a, D b) { return _mm256_sub_pd(a, b); }
  static D mul(D a, D b) { return _mm256_mul_pd(a, b); }
  static D div(D a, D b) { return _mm256_div_pd(a, b); }
  static D sqrt(D a) { return _mm256_sqrt_pd(a); }
  static D max(D a, D b) { return _mm256_max_pd(a, b); }
  static D min(D a, D b) { return _mm256_min_pd(a, b); }
  static M gt(D a, D b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
  static M mask_and(M a, M b) { return _mm256_and_pd(a, b); }
  static bool any(M m) { return _mm256_movemask_pd(m) != 0; }
  static D select(M m, D a, D b) { return _mm256_blendv_pd(b, a, m); }
  static U uand(U a, U b) { return _mm256_and_si256(a, b); }
  static U uor(U a, U b) { return _mm256_or_si256(a, b); }
  static U uxor(U a, U b) { return _mm256_xor_si256(a, b); }
  static M ueq(U a, U b) { return _mm256_castsi256_pd(_mm256_cmpeq_epi64(a, b)); }
  template <int N>
  static U shl(U a) {
    return _mm256_slli_epi64(a, N);
  }
  template <int N>
  static U shr(U a) {
    return _mm256_srli_epi64(a, N);
  }
  static U mul32(U a, U b) { return _mm256_mul_epu32(a, b); }
  static D as_double(U a) { return _mm256_castsi256_pd(a); }
  static U as_bits(D a) { return _mm256_castpd_si256(a); }
  static U lane_index(std::uint64_t first) {
    return _mm256_add_epi64(setu(first), _mm256_set_epi64x(3, 2, 1, 0));
  }
  static void store(double* out, D v, std::uint64_t remaining) {
    if (remaining >= 4) {
      _mm256_storeu_pd(out, v);
      return;
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    for (std::uint64_t i = 0; i < remaining; ++i) out[i] = lanes[i];
  }
};

}  // namespace

void simulate_avx2(const KernelArgs& args, std::uint64_t first, std::uint64_t count, double* out) {
  simulate_paths<Avx2Backend>(args, first, count, out);
}

bool avx2_compiled() { return true; }

}  // namespace atomiv::mc::detail
