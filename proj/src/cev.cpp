#include "atomiv/cev.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "atomiv/blackscholes.hpp"
#include "atomiv/errors.hpp"
#include "atomiv/specfun.hpp"

namespace atomiv::cev {

namespace {

// sqrt(2 ln 1e20): the Gaussian factor exp(-(v - b)^2 / (2 theta)) is below
// 1e-20 of its peak beyond this many sqrt(theta) from b.
constexpr double kTailWidth = 9.5982534728678;

double unit_weight(double, double) { return 1.0; }
double identity_weight(double x, double) { return x; }
double put_weight(double x, double K) { return K - x; }

}  // namespace

void validate(const CevParams& p) {
  std::ostringstream os;
  if (!(p.s0 > 0.0) || !std::isfinite(p.s0)) os << "s0 must be positive; ";
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) os << "sigma must be positive; ";
  if (!(p.rho > 0.0 && p.rho < 1.0)) os << "rho must lie in (0, 1); ";
  if (!(p.T > 0.0) || !std::isfinite(p.T)) os << "T must be positive; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw DomainError("CEV parameters: " + msg.substr(0, msg.size() - 2));
}

CevDistribution::CevDistribution(const CevParams& params) : p_(params) {
  validate(p_);
  one_minus_rho_ = 1.0 - p_.rho;
  alpha_ = 1.0 / (2.0 * one_minus_rho_);
  theta_ = p_.T * p_.sigma * p_.sigma * one_minus_rho_ * one_minus_rho_;
  b_ = std::pow(p_.s0, one_minus_rho_);
  gamma_arg_ = b_ * b_ / (2.0 * theta_);
  mass_ = specfun::reg_inc_gamma_upper(alpha_, gamma_arg_);
  const double log_scale = std::log(p_.T * p_.sigma * p_.sigma * one_minus_rho_);
  log_c_prime_ = 0.5 * std::log(p_.s0) - log_scale;
  c_ = std::exp(log_c_prime_ - gamma_arg_);
  // Small-z limit of I_alpha applied to the density; the exponent carries
  // s0^{2(1-rho)}, which is what the limit of the density itself produces.
  c_tilde_ = std::exp(std::log(p_.s0) - log_scale - alpha_ * std::log(2.0 * theta_) - std::lgamma(alpha_ + 1.0) -
                      gamma_arg_);
  v_max_ = b_ + std::sqrt(theta_) * kTailWidth;
  quad_options_ = quad::Options{};
}

double CevDistribution::density(double x) const {
  if (!(x > 0.0)) throw DomainError("CEV density is defined for x > 0");
  const double v = std::pow(x, one_minus_rho_);
  const double scaled = specfun::bessel_i_scaled(alpha_, v * b_ / theta_);
  if (!(scaled > 0.0)) return 0.0;
  const double d = v - b_;
  return std::exp(log_c_prime_ + (0.5 - 2.0 * p_.rho) * std::log(x) - d * d / (2.0 * theta_) + std::log(scaled));
}

double CevDistribution::integrand_v(double v) const {
  if (!(v > 0.0)) return 0.0;
  const double scaled = specfun::bessel_i_scaled(alpha_, v * b_ / theta_);
  if (!(scaled > 0.0)) return 0.0;
  const double d = v - b_;
  return std::exp(log_c_prime_ - std::log(one_minus_rho_) + (0.5 - p_.rho) / one_minus_rho_ * std::log(v) -
                  d * d / (2.0 * theta_) + std::log(scaled));
}

double CevDistribution::integrate_v(double (*weight)(double x, double K), double K, double v_lo,
                                    double v_hi) const {
  const double power = 1.0 / one_minus_rho_;
  auto f = [&](double v) { return integrand_v(v) * weight(std::pow(v, power), K); };
  quad::Options opt = quad_options_;
  // Deep-strike integrals are tiny; ask for relative accuracy only.
  if (weight == &put_weight) opt.abs_tol = 0.0;
  if (v_lo < b_ && b_ < v_hi) {
    return quad::integrate(f, v_lo, b_, opt).value + quad::integrate(f, b_, v_hi, opt).value;
  }
  return quad::integrate(f, v_lo, v_hi, opt).value;
}

double CevDistribution::p_tilde(double K) const {
  if (!(K > 0.0)) throw DomainError("p_tilde needs K > 0");
  const double v_k = std::pow(K, one_minus_rho_);
  if (v_k >= v_max_) return continuous_mass();
  auto f = [&](double v) { return integrand_v(v); };
  quad::Options opt = quad_options_;
  opt.abs_tol = 0.0;
  if (b_ < v_k) return quad::integrate(f, 0.0, b_, opt).value + quad::integrate(f, b_, v_k, opt).value;
  return quad::integrate(f, 0.0, v_k, opt).value;
}

double CevDistribution::put(double K) const {
  if (!(K > 0.0)) throw DomainError("put needs K > 0");
  const double v_k = std::fmin(std::pow(K, one_minus_rho_), v_max_);
  return K * mass_ + integrate_v(&put_weight, K, 0.0, v_k);
}

double CevDistribution::continuous_mass() const { return integrate_v(&unit_weight, 0.0, 0.0, v_max_); }

double CevDistribution::first_moment() const { return integrate_v(&identity_weight, 0.0, 0.0, v_max_); }

double CevDistribution::exact_smile(double K) const {
  if (!(K > 0.0 && K < p_.s0)) throw DomainError("exact_smile needs 0 < K < s0");
  const bs::MarketSlice slice{p_.s0, p_.T};
  return bs::implied_vol(slice, {K, bs::OptionKind::Put, put(K)});
}

atom::AtomModel CevDistribution::atom_model() const {
  auto self = std::make_shared<const CevDistribution>(*this);
  atom::AtomModel model;
  model.mass = mass_;
  model.put = [self](double K) { return self->put(K); };
  model.p_tilde = [self](double K) { return self->p_tilde(K); };
  return model;
}

double mass_at_zero(const CevParams& p) {
  validate(p);
  const double omr = 1.0 - p.rho;
  const double b = std::pow(p.s0, omr);
  return specfun::reg_inc_gamma_upper(1.0 / (2.0 * omr), b * b / (2.0 * p.T * p.sigma * p.sigma * omr * omr));
}

double density(const CevParams& p, double x) { return CevDistribution(p).density(x); }
double small_x_constant(const CevParams& p) { return CevDistribution(p).c_tilde(); }
double p_tilde(const CevParams& p, double K) { return CevDistribution(p).p_tilde(K); }
double put_price(const CevParams& p, double K) { return CevDistribution(p).put(K); }
double exact_smile(const CevParams& p, double K) { return CevDistribution(p).exact_smile(K); }

}  // namespace atomiv::cev
