#pragma once

#include <cmath>
#include <utility>

namespace atomiv::roots {

struct Root {
  double x;
  int iterations;
};

/// Bisection for a non-decreasing f with f(lo) <= 0 <= f(hi). Stops when the
/// bracket is narrower than `xtol` or after `max_iter` halvings.
template <class F>
Root bisect_increasing(F&& f, double lo, double hi, double xtol, int max_iter) {
  int it = 0;
  for (; it < max_iter && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), it};
}

/// Brent's method on a bracket with f(a) * f(b) <= 0. Terminates when the
/// bracket is below 2 * eps * |b| + xtol, or f vanishes.
template <class F>
Root brent(F&& f, double a, double b, double fa, double fb, double xtol, int max_iter) {
  constexpr double eps = 2.220446049250313e-16;
  if (fa == 0.0) return {a, 0};
  if (fb == 0.0) return {b, 0};
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  int it = 0;
  for (; it < max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::fabs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0) return {b, it};
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points differ.
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::fmin(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
  }
  return {b, it};
}

}  // namespace atomiv::roots
