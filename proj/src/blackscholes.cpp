#include "atomiv/blackscholes.hpp"

#include <cmath>
#include <sstream>

#include "atomiv/errors.hpp"
#include "atomiv/roots.hpp"
#include "atomiv/specfun.hpp"

namespace atomiv::bs {

namespace {

using specfun::mills_ratio;
using specfun::mills_ratio_derivative;
using specfun::norm_cdf;

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Five-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[3] = {0.0, 0.538469310105683091036314420700208,
                               0.906179845938663992797626878299393};
constexpr double kGlWeight[3] = {0.568888888888888888888888888888889,
                                 0.478628670499366468041291514835638,
                                 0.236926885056189087514264040719918};

// M(lo) - M(hi) for lo < hi, where M is the Mills ratio. When the interval is
// short relative to lo the difference cancels badly, so integrate -M' instead.
double mills_difference(double lo, double hi) {
  const double width = hi - lo;
  if (width > 1e-3 * lo) return mills_ratio(lo) - mills_ratio(hi);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * width;
  double sum = kGlWeight[0] * -mills_ratio_derivative(mid);
  for (int j = 1; j < 3; ++j) {
    sum += kGlWeight[j] * (-mills_ratio_derivative(mid - half * kGlNode[j]) -
                           mills_ratio_derivative(mid + half * kGlNode[j]));
  }
  return sum * half;
}

// log of the put price with total volatility s = sigma * sqrt(T).
double log_put(double spot, double strike, double s) {
  const double d1 = (std::log(spot / strike) + 0.5 * s * s) / s;
  const double d2 = d1 - s;
  if (d2 > 0.0) {
    // P = K N(-d2) - x0 N(-d1) = K phi(d2) (M(d2) - M(d1)), using
    // x0 phi(d1) = K phi(d2).
    return std::log(strike) - 0.5 * d2 * d2 - kLogSqrt2Pi + std::log(mills_difference(d2, d1));
  }
  return std::log(strike * norm_cdf(-d2) - spot * norm_cdf(-d1));
}

void check_strike_and_vol(double K, double sigma) {
  if (!(K > 0.0) || !std::isfinite(K)) throw DomainError("strike must be positive and finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("volatility must be positive and finite");
}

}  // namespace

void validate(const MarketSlice& slice) {
  if (!(slice.x0 > 0.0) || !std::isfinite(slice.x0)) throw DomainError("spot x0 must be positive");
  if (!(slice.T > 0.0) || !std::isfinite(slice.T)) throw DomainError("maturity T must be positive");
}

D1D2 d1_d2(const MarketSlice& slice, double K, double sigma) {
  validate(slice);
  check_strike_and_vol(K, sigma);
  const double s = sigma * std::sqrt(slice.T);
  const double d1 = (std::log(slice.x0 / K) + 0.5 * s * s) / s;
  return {d1, d1 - s};
}

double log_otm_price(const MarketSlice& slice, double K, double sigma) {
  validate(slice);
  check_strike_and_vol(K, sigma);
  const double s = sigma * std::sqrt(slice.T);
  // The call at (x0, K) is the put with spot and strike exchanged.
  if (K < slice.x0) return log_put(slice.x0, K, s);
  return log_put(K, slice.x0, s);
}

double bs_price(const MarketSlice& slice, double K, double sigma, OptionKind kind) {
  const double otm = std::exp(log_otm_price(slice, K, sigma));
  if (K < slice.x0) return kind == OptionKind::Put ? otm : otm + slice.x0 - K;
  return kind == OptionKind::Call ? otm : otm - slice.x0 + K;
}

double vega(const MarketSlice& slice, double K, double sigma) {
  const auto d = d1_d2(slice, K, sigma);
  return slice.x0 * specfun::norm_pdf(d.d1) * std::sqrt(slice.T);
}

double implied_vol(const MarketSlice& slice, const OptionQuote& quote) {
  validate(slice);
  const double K = quote.strike;
  const double x0 = slice.x0;
  if (!(K > 0.0) || !std::isfinite(K)) throw DomainError("strike must be positive and finite");
  if (!std::isfinite(quote.price)) throw NoSolution("implied_vol: price is not finite");
  const bool call = quote.kind == OptionKind::Call;
  const double intrinsic = call ? std::fmax(x0 - K, 0.0) : std::fmax(K - x0, 0.0);
  const double upper = call ? x0 : K;
  if (!(quote.price > intrinsic) || !(quote.price < upper)) {
    std::ostringstream os;
    os << "implied_vol: price " << quote.price << " outside the no-arbitrage band (" << intrinsic << ", " << upper
       << ")";
    throw NoSolution(os.str());
  }
  double otm = quote.price;
  if (K < x0 && call) otm = quote.price - x0 + K;
  if (K >= x0 && !call) otm = quote.price + x0 - K;
  if (!(otm > 0.0)) throw NoSolution("implied_vol: out-of-the-money price lost to rounding");
  return implied_vol_from_log_otm(slice, K, std::log(otm));
}

double implied_vol_from_log_otm(const MarketSlice& slice, double K, double log_price) {
  validate(slice);
  if (!(K > 0.0) || !std::isfinite(K)) throw DomainError("strike must be positive and finite");
  if (std::isnan(log_price) || log_price == -INFINITY) throw NoSolution("implied_vol: price is not positive");
  if (!(log_price < std::log(std::fmin(K, slice.x0)))) {
    throw NoSolution("implied_vol: price at or above the no-arbitrage upper bound");
  }
  auto f = [&](double sigma) { return log_otm_price(slice, K, sigma) - log_price; };
  double lo = 1e-9;
  double flo = f(lo);
  for (int i = 0; flo > 0.0; ++i) {
    if (i == 30) throw NoSolution("implied_vol: volatility below 1e-39");
    lo *= 0.05;
    flo = f(lo);
  }
  double hi = 10.0;
  double fhi = f(hi);
  for (int i = 0; fhi < 0.0; ++i) {
    if (i == 60) throw NoSolution("implied_vol: could not bracket the volatility from above");
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
  }
  return roots::brent(f, lo, hi, flo, fhi, 1e-15, 300).x;
}

}  // namespace atomiv::bs
