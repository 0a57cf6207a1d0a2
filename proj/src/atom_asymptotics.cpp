#include "atomiv/atom_asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "atomiv/errors.hpp"
#include "atomiv/roots.hpp"
#include "atomiv/specfun.hpp"

namespace atomiv::atom {

namespace {

using specfun::kSqrt2;
using specfun::kSqrtPi;
using specfun::norm_cdf;
using specfun::norm_cdf_inv;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_log_k(double log_k) {
  if (!(log_k > 0.0) || !std::isfinite(log_k)) throw DomainError("U_K needs log K > 0");
}

void check_mass(double mass) {
  if (!(mass > 0.0 && mass < 1.0)) {
    std::ostringstream os;
    os << "mass at zero must lie in (0, 1), got " << mass;
    throw DomainError(os.str());
  }
}

// Walks deeper from l_fail until the lower-bound argument enters U's range.
double first_defined_depth(const std::function<double(double)>& y_of_l, double l_fail) {
  double l_ok = l_fail;
  for (int i = 0; i < 12; ++i) {
    l_ok = 2.0 * l_ok + 1.0;
    if (l_ok > 700.0) return kNaN;
    if (y_of_l(l_ok) >= u_k_left(l_ok)) return minimal_log_k(y_of_l, l_fail, l_ok);
  }
  return kNaN;
}

}  // namespace

void validate(const AtomModel& model) { check_mass(model.mass); }

double u_k(double x, double log_k) {
  check_log_k(log_k);
  return norm_cdf(x) - std::exp(-0.5 * x * x) / (2.0 * kSqrtPi * std::sqrt(log_k));
}

double u_k_left(double log_k) {
  check_log_k(log_k);
  // N(-a) - phi(a)/a with a = sqrt(2 log K), written through the Mills ratio.
  const double a = std::sqrt(2.0 * log_k);
  return specfun::norm_pdf(a) * specfun::mills_ratio_derivative(a) / a;
}

double sign_threshold(double log_k) {
  check_log_k(log_k);
  return 0.5 - 1.0 / (2.0 * kSqrtPi * std::sqrt(log_k));
}

double u_k_inv(double y, double log_k) {
  check_log_k(log_k);
  if (std::isnan(y)) throw DomainError("u_k_inv: target is NaN");
  if (y >= 1.0) throw DomainAbove("u_k_inv: target must be below 1");
  const double left = u_k_left(log_k);
  if (y < left) {
    std::ostringstream os;
    os << "u_k_inv: target " << y << " lies below U_K(-sqrt(2 log K)) = " << left << " at log K = " << log_k;
    throw DomainBelow(os.str(), kNaN);
  }
  const double a = std::sqrt(2.0 * log_k);
  if (y == left) return -a;
  auto f = [&](double x) { return u_k(x, log_k) - y; };
  // Splitting at 0 keeps the sign of the result consistent with U_K(0).
  const double f0 = f(0.0);
  if (f0 == 0.0) return 0.0;
  double lo = -a;
  double hi = 0.0;
  if (f0 < 0.0) {
    lo = 0.0;
    const double margin = 1.0 / (2.0 * kSqrtPi * std::sqrt(log_k));
    hi = norm_cdf_inv(std::fmin(y + margin, 1.0 - 1e-16)) + 1.0;
  }
  return roots::bisect_increasing(f, lo, hi, 1e-13, 200).x;
}

double minimal_log_k(const std::function<double(double)>& y_of_l, double l_min, double l_ok) {
  double lo = l_min;
  double hi = l_ok;
  for (int i = 0; i < 200 && hi - lo > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (y_of_l(mid) >= u_k_left(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double g_from_put(const std::function<double(double)>& put, const MarketSlice& slice, double k_big) {
  bs::validate(slice);
  if (!(k_big > 1.0)) throw DomainError("G is evaluated at arguments above 1");
  const double K = slice.x0 / k_big;
  return put(K) / K;
}

double model_g(const AtomModel& model, const MarketSlice& slice, double K) {
  if (model.g) return model.g(slice.x0 / K);
  if (model.put) return model.put(K) / K;
  return model.mass;
}

double wing_depth(const MarketSlice& slice, double K) {
  bs::validate(slice);
  if (!(K > 0.0 && K < slice.x0)) {
    std::ostringstream os;
    os << "wing formulas need 0 < K < x0, got K = " << K << ", x0 = " << slice.x0;
    throw DomainError(os.str());
  }
  const double L = std::log(slice.x0 / K);
  if (!(L > 0.0)) throw DomainError("strike rounds to the spot");
  return L;
}

double three_term(double T, double L, double u) {
  const double rt = std::sqrt(T);
  const double rl = std::sqrt(L);
  return kSqrt2 * rl / rt + u / rt + kSqrt2 * u * u / (4.0 * rt * rl);
}

double sqrt_form(double T, double L, double u) {
  const double r = std::sqrt(u * u + 2.0 * L);
  const double sum = u >= 0.0 ? u + r : 2.0 * L / (r - u);
  return sum / std::sqrt(T);
}

double smile_leading(const MarketSlice& slice, double K, double put_price) {
  wing_depth(slice, K);
  if (!(put_price > 0.0 && put_price < K)) throw DomainError("smile_leading: need 0 < P(K) < K");
  const double a = std::log(slice.x0 / put_price);
  const double b = std::log(K / put_price);
  return kSqrt2 / std::sqrt(slice.T) * (std::sqrt(a) - std::sqrt(b));
}

double smile_three_term_atom(const MarketSlice& slice, double K, double mass) {
  const double L = wing_depth(slice, K);
  check_mass(mass);
  return three_term(slice.T, L, u_k_inv(mass, L));
}

double smile_three_term_pT(const MarketSlice& slice, double K, const AtomModel& model) {
  const double L = wing_depth(slice, K);
  validate(model);
  if (!model.p_tilde) throw DomainError("smile_three_term_pT: model has no p_tilde evaluator");
  return three_term(slice.T, L, u_k_inv(model.mass + model.p_tilde(K), L));
}

double smile_three_term_G(const MarketSlice& slice, double K, const AtomModel& model) {
  const double L = wing_depth(slice, K);
  validate(model);
  return three_term(slice.T, L, u_k_inv(model_g(model, slice, K), L));
}

double smile_dmhj(const MarketSlice& slice, double K, double mass) {
  const double L = wing_depth(slice, K);
  check_mass(mass);
  return three_term(slice.T, L, norm_cdf_inv(mass));
}

double bounds_shift(double mass, double L, double epsilon) {
  check_mass(mass);
  if (!(epsilon > 0.0)) throw DomainError("bounds epsilon must be positive");
  const double n = norm_cdf_inv(mass);
  return (3.0 * n * n + 2.0 + epsilon) / (8.0 * kSqrtPi * L * std::sqrt(L));
}

double smile_upper_bound(const MarketSlice& slice, double K, const AtomModel& model) {
  const double L = wing_depth(slice, K);
  validate(model);
  return sqrt_form(slice.T, L, u_k_inv(model_g(model, slice, K), L));
}

double smile_lower_bound(const MarketSlice& slice, double K, const AtomModel& model, const BoundsConfig& cfg) {
  const double L = wing_depth(slice, K);
  validate(model);
  auto y_of_l = [&](double l) {
    return model_g(model, slice, slice.x0 * std::exp(-l)) - bounds_shift(model.mass, l, cfg.epsilon);
  };
  const double y = y_of_l(L);
  try {
    return sqrt_form(slice.T, L, u_k_inv(y, L));
  } catch (const DomainBelow&) {
    const double l_min = first_defined_depth(y_of_l, L);
    std::ostringstream os;
    os << "lower bound undefined at L = " << L << ": G - delta = " << y << " is below U's range";
    if (std::isfinite(l_min)) os << "; first defined at L ~ " << l_min;
    throw DomainBelow(os.str(), l_min);
  }
}

Bounds smile_bounds(const MarketSlice& slice, double K, const AtomModel& model, const BoundsConfig& cfg) {
  const double upper = smile_upper_bound(slice, K, model);
  const double lower = smile_lower_bound(slice, K, model, cfg);
  return {lower, upper};
}

double estims_ratio(double mass, double log_inv_k) {
  check_mass(mass);
  check_log_k(log_inv_k);
  const double n = norm_cdf_inv(mass);
  const double a = std::sqrt(2.0 * log_inv_k);
  if (!(norm_cdf(-a) < mass)) {
    std::ostringstream os;
    os << "estims_ratio: N(-sqrt(2L)) >= m at L = " << log_inv_k;
    throw DomainBelow(os.str(), 0.5 * n * n);
  }
  return a * (u_k_inv(mass, log_inv_k) - n);
}

Sign sign_classify(double mass, double log_inv_k) {
  check_mass(mass);
  if (mass >= 0.5) throw DomainError("sign_classify covers masses below 1/2 only");
  if (!(mass > u_k_left(log_inv_k))) throw DomainBelow("sign_classify: mass below U's range", kNaN);
  const double threshold = sign_threshold(log_inv_k);
  if (mass > threshold) return Sign::Positive;
  if (mass == threshold) return Sign::Zero;
  return Sign::Negative;
}

double dmhj_error_envelope(const MarketSlice& slice, double K, const AtomModel& model) {
  const double L = wing_depth(slice, K);
  validate(model);
  const double n = norm_cdf_inv(model.mass);
  const double psi = model_g(model, slice, K) - model.mass;
  const double rt = std::sqrt(slice.T);
  return kSqrt2 / (2.0 * rt * std::sqrt(L)) + specfun::kSqrt2Pi / rt * std::exp(0.5 * n * n) * psi;
}

SmileApproximation evaluate(const MarketSlice& slice, double K, const AtomModel& model, const BoundsConfig& cfg) {
  SmileApproximation out;
  out.K = K;
  out.L = wing_depth(slice, K);
  validate(model);
  auto attempt = [](std::optional<double>& slot, auto&& fn) {
    try {
      slot = fn();
    } catch (const DomainError&) {
      slot.reset();
    }
  };
  const double g = model_g(model, slice, K);
  attempt(out.leading, [&] { return smile_leading(slice, K, K * g); });
  attempt(out.u_inv_value, [&] { return u_k_inv(model.mass, out.L); });
  attempt(out.three_term_atom, [&] { return smile_three_term_atom(slice, K, model.mass); });
  if (model.p_tilde) attempt(out.three_term_pT, [&] { return smile_three_term_pT(slice, K, model); });
  attempt(out.three_term_G, [&] { return three_term(slice.T, out.L, u_k_inv(g, out.L)); });
  attempt(out.dmhj, [&] { return smile_dmhj(slice, K, model.mass); });
  attempt(out.upper, [&] { return sqrt_form(slice.T, out.L, u_k_inv(g, out.L)); });
  attempt(out.lower, [&] {
    return sqrt_form(slice.T, out.L, u_k_inv(g - bounds_shift(model.mass, out.L, cfg.epsilon), out.L));
  });
  return out;
}

}  // namespace atomiv::atom
