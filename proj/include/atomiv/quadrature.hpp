#pragma once

#include <functional>

namespace atomiv::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on the finite interval [a, b].
/// The interval with the largest error estimate is bisected until
/// error <= max(abs_tol, rel_tol * |value|). Throws QuadratureError when the
/// interval budget runs out or the integrand is not finite.
Result integrate(const std::function<double(double)>& f, double a, double b, const Options& opt = {});

}  // namespace atomiv::quad
