#pragma once

// Special functions used by the smile formulas and the CEV backend.
// Everything here is pure and reentrant.

namespace atomiv::specfun {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double norm_pdf(double x);

/// Standard normal CDF. Relative accuracy is kept in the lower tail; the
/// result saturates to 0 or 1 only where the true value is not representable.
double norm_cdf(double x);

/// Inverse of norm_cdf on (0, 1); throws DomainError outside.
double norm_cdf_inv(double p);

/// Mills ratio N(-x) / phi(x). Accurate to a few ulp for all x >= 0, where it
/// stays representable even when N(-x) underflows.
double mills_ratio(double x);

/// Derivative of the Mills ratio, x * M(x) - 1 (always negative). Evaluated
/// without cancellation for large x, where it behaves like -1/x^2.
double mills_ratio_derivative(double x);

/// Regularized lower incomplete gamma P(a, y) = (1/Gamma(a)) int_0^y t^{a-1} e^{-t} dt.
/// Requires a > 0 and y >= 0.
double reg_inc_gamma(double a, double y);

/// Complement Q(a, y) = 1 - P(a, y), computed without cancellation when P is near 1.
double reg_inc_gamma_upper(double a, double y);

/// Exponentially scaled modified Bessel function of the first kind,
/// e^{-x} I_order(x), for x >= 0. The order may be fractional and negative
/// but not a negative integer.
double bessel_i_scaled(double order, double x);

/// Unscaled I_order(x); overflows to +inf for large x.
double bessel_i(double order, double x);

}  // namespace atomiv::specfun
