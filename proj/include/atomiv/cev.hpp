#pragma once

#include "atomiv/atom_asymptotics.hpp"
#include "atomiv/quadrature.hpp"

// CEV model dS = sigma S^rho dW on [0, inf) with absorption at zero.
// The terminal law is an atom at zero plus a Bessel-type density; prices are
// obtained by quadrature of that density.

namespace atomiv::cev {

struct CevParams {
  double s0;
  double sigma;
  double rho;  // also called beta
  double T;
};

void validate(const CevParams& p);

class CevDistribution {
 public:
  explicit CevDistribution(const CevParams& params);

  const CevParams& params() const { return p_; }
  double mass() const { return mass_; }
  /// Prefactor c of the density.
  double c() const { return c_; }
  /// Constant of the small-x asymptote density(x) ~ c_tilde x^{1 - 2 rho}.
  double c_tilde() const { return c_tilde_; }
  /// Shape 1/(2(1 - rho)) and argument s0^{2(1-rho)}/(2 T sigma^2 (1-rho)^2) of the incomplete gamma.
  double gamma_shape() const { return alpha_; }
  double gamma_argument() const { return gamma_arg_; }

  double density(double x) const;
  /// P(0 < S_T <= K).
  double p_tilde(double K) const;
  double put(double K) const;
  /// Integrals of the continuous part over (0, inf), truncated where the
  /// Gaussian factor drops below 1e-20 of its peak.
  double continuous_mass() const;
  double first_moment() const;
  /// Implied volatility of put(K) on the slice (s0, T).
  double exact_smile(double K) const;

  /// Model view consumed by the smile formulas; keeps a copy of this distribution.
  atom::AtomModel atom_model() const;

 private:
  // Density in v = x^{1-rho}, including the Jacobian; smooth and ~v near 0.
  double integrand_v(double v) const;
  double integrate_v(double (*weight)(double x, double K), double K, double v_lo, double v_hi) const;

  CevParams p_;
  double one_minus_rho_;
  double alpha_;
  double theta_;  // T sigma^2 (1-rho)^2
  double b_;      // s0^{1-rho}
  double gamma_arg_;
  double mass_;
  double c_;
  double c_tilde_;
  double log_c_prime_;
  double v_max_;
  quad::Options quad_options_;
};

double mass_at_zero(const CevParams& p);
double density(const CevParams& p, double x);
double small_x_constant(const CevParams& p);
double p_tilde(const CevParams& p, double K);
double put_price(const CevParams& p, double K);
double exact_smile(const CevParams& p, double K);

}  // namespace atomiv::cev
