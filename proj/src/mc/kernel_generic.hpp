#pragma once

// Path kernel written once against a lane backend B. Only IEEE-exact
// operations (+ - * / sqrt, comparisons, bit manipulation) are used, so every
// backend produces the same bits lane for lane.
//
// B provides: D (double lanes), U (uint64 lanes), M (mask), width, and the
// static operations used below.

#include <cstdint>

#include "kernel.hpp"

namespace atomiv::mc::detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// 1.5 * 2^52: adding and subtracting it rounds to the nearest integer.
inline constexpr double kRoundMagic = 6755399441055744.0;
inline constexpr double kTwo52 = 4503599627370496.0;
inline constexpr std::uint64_t kTwo52Bits = 0x4330000000000000ull;
inline constexpr std::uint64_t kMantissaMask = 0x000fffffffffffffull;

template <class B>
struct Words {
  typename B::U w0, w1, w2, w3;
};

// Counter words are held in the low 32 bits of 64-bit lanes.
template <class B>
Words<B> philox(Words<B> c, std::uint32_t k0, std::uint32_t k1) {
  using U = typename B::U;
  const U m0 = B::setu(kPhiloxM0);
  const U m1 = B::setu(kPhiloxM1);
  const U low = B::setu(0xffffffffull);
  for (int round = 0; round < 10; ++round) {
    const U p0 = B::mul32(m0, c.w0);
    const U p1 = B::mul32(m1, c.w2);
    const U hi0 = B::template shr<32>(p0);
    const U hi1 = B::template shr<32>(p1);
    c = Words<B>{B::uxor(B::uxor(hi1, c.w1), B::setu(k0)), B::uand(p1, low),
                 B::uxor(B::uxor(hi0, c.w3), B::setu(k1)), B::uand(p0, low)};
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

// (m + 1/2) 2^-52 with m the 52 bits (hi:32, lo:top 20); never 0 or 1.
template <class B>
typename B::D uniform(typename B::U hi, typename B::U lo) {
  const auto m = B::uor(B::template shl<20>(hi), B::template shr<12>(lo));
  const auto exact = B::sub(B::as_double(B::uor(m, B::setu(kTwo52Bits))), B::set(kTwo52));
  return B::mul(B::add(exact, B::set(0.5)), B::set(0x1p-52));
}

template <class B>
typename B::D poly_log(typename B::D x) {
  using D = typename B::D;
  constexpr double ln2_hi = 6.93147180369123816490e-01;
  constexpr double ln2_lo = 1.90821492927058770002e-10;
  constexpr double lg1 = 6.666666666666735130e-01;
  constexpr double lg2 = 3.999999999940941908e-01;
  constexpr double lg3 = 2.857142874366239149e-01;
  constexpr double lg4 = 2.222219843214978396e-01;
  constexpr double lg5 = 1.818357216161805012e-01;
  constexpr double lg6 = 1.531383769920937332e-01;
  constexpr double lg7 = 1.479819860511658591e-01;
  // x = 2^k f with f in [sqrt(2)/2, sqrt(2)); x is normal and positive.
  const auto bits = B::as_bits(x);
  const auto exponent = B::template shr<52>(bits);
  D f = B::as_double(B::uor(B::uand(bits, B::setu(kMantissaMask)), B::setu(0x3ff0000000000000ull)));
  const auto big = B::gt(f, B::set(1.41421356237309504880));
  f = B::select(big, B::mul(f, B::set(0.5)), f);
  D k = B::sub(B::as_double(B::uor(exponent, B::setu(kTwo52Bits))), B::set(kTwo52 + 1023.0));
  k = B::add(k, B::select(big, B::set(1.0), B::set(0.0)));
  const D fm = B::sub(f, B::set(1.0));
  const D hfsq = B::mul(B::set(0.5), B::mul(fm, fm));
  const D s = B::div(fm, B::add(B::set(2.0), fm));
  const D z = B::mul(s, s);
  const D w = B::mul(z, z);
  const D t1 = B::mul(w, B::add(B::set(lg2), B::mul(w, B::add(B::set(lg4), B::mul(w, B::set(lg6))))));
  const D t2 = B::mul(
      z, B::add(B::set(lg1),
                B::mul(w, B::add(B::set(lg3), B::mul(w, B::add(B::set(lg5), B::mul(w, B::set(lg7))))))));
  const D r = B::add(t2, t1);
  const D inner = B::sub(hfsq, B::add(B::mul(s, B::add(hfsq, r)), B::mul(k, B::set(ln2_lo))));
  return B::sub(B::mul(k, B::set(ln2_hi)), B::sub(inner, fm));
}

// Valid on [-700, 700].
template <class B>
typename B::D poly_exp(typename B::D x) {
  using D = typename B::D;
  constexpr double ln2_hi = 6.93147180369123816490e-01;
  constexpr double ln2_lo = 1.90821492927058770002e-10;
  constexpr double inv_ln2 = 1.44269504088896338700e+00;
  constexpr double p1 = 1.66666666666666019037e-01;
  constexpr double p2 = -2.77777777770155933842e-03;
  constexpr double p3 = 6.61375632143793436117e-05;
  constexpr double p4 = -1.65339022054652515390e-06;
  constexpr double p5 = 4.13813679705723846039e-08;
  const D k = B::sub(B::add(B::mul(x, B::set(inv_ln2)), B::set(kRoundMagic)), B::set(kRoundMagic));
  const D hi = B::sub(x, B::mul(k, B::set(ln2_hi)));
  const D lo = B::mul(k, B::set(ln2_lo));
  const D r = B::sub(hi, lo);
  const D t = B::mul(r, r);
  const D poly =
      B::add(B::set(p1),
             B::mul(t, B::add(B::set(p2), B::mul(t, B::add(B::set(p3), B::mul(t, B::add(B::set(p4),
                                                                                       B::mul(t, B::set(p5)))))))));
  const D c = B::sub(r, B::mul(t, poly));
  const D y = B::sub(B::set(1.0),
                     B::sub(B::sub(lo, B::div(B::mul(r, c), B::sub(B::set(2.0), c))), hi));
  // 2^k assembled from the integer held in the mantissa of k + 1023 + 2^52.
  const auto n = B::uand(B::as_bits(B::add(k, B::set(kTwo52 + 1023.0))), B::setu(kMantissaMask));
  return B::mul(y, B::as_double(B::template shl<52>(n)));
}

// cos(2 pi u) for u in (0, 1).
template <class B>
typename B::D cos_two_pi(typename B::D u) {
  using D = typename B::D;
  constexpr double half_pi = 1.57079632679489661923;
  constexpr double s1 = -1.66666666666666324348e-01;
  constexpr double s2 = 8.33333333332248946124e-03;
  constexpr double s3 = -1.98412698298579493134e-04;
  constexpr double s4 = 2.75573137070700676789e-06;
  constexpr double s5 = -2.50507602534068634195e-08;
  constexpr double s6 = 1.58969099521155010221e-10;
  constexpr double c1 = 4.16666666666666019037e-02;
  constexpr double c2 = -1.38888888888741095749e-03;
  constexpr double c3 = 2.48015872894767294178e-05;
  constexpr double c4 = -2.75573143513906633035e-07;
  constexpr double c5 = 2.08757232129817482790e-09;
  constexpr double c6 = -1.13596475577881948265e-11;
  const D t = B::mul(u, B::set(4.0));
  const D shifted = B::add(t, B::set(kRoundMagic));
  const D q = B::sub(shifted, B::set(kRoundMagic));
  const D x = B::mul(B::sub(t, q), B::set(half_pi));  // |x| <= pi/4
  const D z = B::mul(x, x);
  const D rs = B::add(B::set(s2),
                      B::mul(z, B::add(B::set(s3), B::mul(z, B::add(B::set(s4), B::mul(z, B::add(B::set(s5),
                                                                                               B::mul(z, B::set(s6)))))))));
  const D sin_x = B::add(x, B::mul(B::mul(z, x), B::add(B::set(s1), B::mul(z, rs))));
  const D rc = B::mul(
      z, B::add(B::set(c1),
                B::mul(z, B::add(B::set(c2),
                                 B::mul(z, B::add(B::set(c3),
                                                  B::mul(z, B::add(B::set(c4),
                                                                   B::mul(z, B::add(B::set(c5),
                                                                                    B::mul(z, B::set(c6))))))))))));
  const D hz = B::mul(B::set(0.5), z);
  const D w = B::sub(B::set(1.0), hz);
  const D cos_x = B::add(w, B::add(B::sub(B::sub(B::set(1.0), w), hz), B::mul(z, rc)));
  // Quadrant q mod 4 sits in the low mantissa bits of `shifted`.
  const auto quadrant = B::uand(B::as_bits(shifted), B::setu(3));
  const D value = B::select(B::ueq(B::uand(quadrant, B::setu(1)), B::setu(1)), sin_x, cos_x);
  // cos for q = 0, -sin for 1, -cos for 2, sin for 3.
  const auto odd_half = B::uxor(B::template shr<1>(quadrant), B::uand(quadrant, B::setu(1)));
  return B::as_double(B::uxor(B::as_bits(value), B::template shl<63>(B::uand(odd_half, B::setu(1)))));
}

template <class B>
void simulate_paths(const KernelArgs& a, std::uint64_t first, std::uint64_t count, double* out) {
  using D = typename B::D;
  using U = typename B::U;
  const std::uint32_t k0 = static_cast<std::uint32_t>(a.seed);
  const std::uint32_t k1 = static_cast<std::uint32_t>(a.seed >> 32);
  const D scale = B::set(a.sigma * a.sqrt_dt);
  const D rho = B::set(a.rho);
  const D zero = B::set(0.0);
  const D tiny = B::set(0x1p-1022);
  for (std::uint64_t base = 0; base < count; base += B::width) {
    const U path = B::lane_index(first + base);
    U stream = path;
    D sign = B::set(1.0);
    if (a.antithetic) {
      stream = B::template shr<1>(path);
      sign = B::select(B::ueq(B::uand(path, B::setu(1)), B::setu(1)), B::set(-1.0), sign);
    }
    const U stream_lo = B::uand(stream, B::setu(0xffffffffull));
    const U stream_hi = B::template shr<32>(stream);
    D s = B::set(a.s0);
    for (std::uint32_t step = 0; step < a.n_steps; ++step) {
      const auto alive = B::gt(s, zero);
      if (!B::any(alive)) break;
      const Words<B> w = philox<B>({stream_lo, stream_hi, B::setu(step), B::setu(0)}, k0, k1);
      const D u1 = uniform<B>(w.w0, w.w1);
      const D u2 = uniform<B>(w.w2, w.w3);
      const D radius = B::sqrt(B::mul(B::set(-2.0), poly_log<B>(u1)));
      const D z = B::mul(sign, B::mul(radius, cos_two_pi<B>(u2)));
      D exponent = B::mul(rho, poly_log<B>(B::max(s, tiny)));
      exponent = B::min(B::max(exponent, B::set(-700.0)), B::set(700.0));
      const D next = B::add(s, B::mul(B::mul(scale, poly_exp<B>(exponent)), z));
      s = B::select(B::mask_and(alive, B::gt(next, zero)), next, zero);
    }
    B::store(out + base, s, count - base);
  }
}

}  // namespace atomiv::mc::detail
