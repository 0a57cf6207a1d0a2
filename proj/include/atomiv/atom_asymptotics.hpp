#pragma once

#include <functional>
#include <optional>

#include "atomiv/blackscholes.hpp"

// Small-strike implied volatility for models whose terminal law has an atom
// at zero. Depth is measured by L = log(x0 / K) > 0; the strike-dependent
// family U_K is parametrised by log K directly so that astronomically deep
// strikes (log K ~ 1e4) stay representable.

namespace atomiv::atom {

using bs::MarketSlice;

/// Mass at zero plus optional evaluators of the continuous part. All
/// evaluators take actual strikes in price units, except `g`, which takes the
/// normalised argument x0 / K > 1 and returns G(x0 / K) = P(K) / K.
struct AtomModel {
  double mass = 0.0;
  std::function<double(double)> g;
  std::function<double(double)> p_tilde;  // K -> P(0 < X_T <= K)
  std::function<double(double)> put;      // K -> P(K)
};

struct BoundsConfig {
  double epsilon = 0.01;
};

struct SmileApproximation {
  double K = 0.0;
  double L = 0.0;
  std::optional<double> leading;
  std::optional<double> three_term_atom;
  std::optional<double> three_term_pT;
  std::optional<double> three_term_G;
  std::optional<double> dmhj;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> u_inv_value;  // (U_{x0/K})^{-1}(m_T)
};

enum class Sign { Negative, Zero, Positive };

void validate(const AtomModel& model);

/// U_K(x) = N(x) - exp(-x^2/2) / (2 sqrt(pi) sqrt(log K)), for log K > 0.
double u_k(double x, double log_k);

/// U_K at the left end -sqrt(2 log K) of its increasing branch. Always negative.
double u_k_left(double log_k);

/// The y at which (U_K)^{-1}(y) changes sign: 1/2 - 1/(2 sqrt(pi) sqrt(log K)).
double sign_threshold(double log_k);

/// Inverse of U_K on [-sqrt(2 log K), inf). Throws DomainBelow if
/// y < u_k_left(log_k) and DomainAbove if y >= 1.
double u_k_inv(double y, double log_k);

/// Smallest depth L >= l_min at which y(L) >= u_k_left(L), by bisection between
/// l_min and a depth l_ok where the condition is known to hold.
double minimal_log_k(const std::function<double(double)>& y_of_l, double l_min, double l_ok);

/// G(K') = K' P(x0 / K') / x0 for K' > 1.
double g_from_put(const std::function<double(double)>& put, const MarketSlice& slice, double k_big);

/// G(x0/K) with precedence: explicit g, then the put evaluator, then m_T.
double model_g(const AtomModel& model, const MarketSlice& slice, double K);

/// log(x0 / K); throws DomainError unless 0 < K < x0.
double wing_depth(const MarketSlice& slice, double K);

/// sqrt(2/T) sqrt(L) + u / sqrt(T) + sqrt(2) u^2 / (4 sqrt(T) sqrt(L)).
double three_term(double T, double L, double u);

/// sqrt(2/T) sqrt(L + H) with H = u^2 + u sqrt(u^2 + 2L), in a cancellation-free form.
double sqrt_form(double T, double L, double u);

double smile_leading(const MarketSlice& slice, double K, double put_price);
double smile_three_term_atom(const MarketSlice& slice, double K, double mass);
double smile_three_term_pT(const MarketSlice& slice, double K, const AtomModel& model);
double smile_three_term_G(const MarketSlice& slice, double K, const AtomModel& model);
double smile_dmhj(const MarketSlice& slice, double K, double mass);

/// The sqrt-form upper bound, driven by (U)^{-1}(G).
double smile_upper_bound(const MarketSlice& slice, double K, const AtomModel& model);

/// The sqrt-form lower bound, driven by (U)^{-1}(G - delta_eps). Throws
/// DomainBelow, carrying the minimal depth, when G - delta_eps is below U's range.
double smile_lower_bound(const MarketSlice& slice, double K, const AtomModel& model, const BoundsConfig& cfg);

struct Bounds {
  double lower;
  double upper;
};
Bounds smile_bounds(const MarketSlice& slice, double K, const AtomModel& model, const BoundsConfig& cfg);

/// delta_eps = (3 N^{-1}(m)^2 + 2 + eps) / (8 sqrt(pi) L^{3/2}).
double bounds_shift(double mass, double L, double epsilon);

/// sqrt(2 L) ((U_{e^L})^{-1}(m) - N^{-1}(m)) with L = log(1/K); tends to 1.
/// Throws DomainBelow unless N(-sqrt(2L)) < m.
double estims_ratio(double mass, double log_inv_k);

/// Sign of (U_{e^L})^{-1}(m) for U(-sqrt(2L)) < m < 1/2.
Sign sign_classify(double mass, double log_inv_k);

/// Psi(x0/K) = sqrt(2)/(2 sqrt(T)) L^{-1/2} + sqrt(2 pi / T) exp(n^2/2) (G - m).
double dmhj_error_envelope(const MarketSlice& slice, double K, const AtomModel& model);

/// Everything above at one strike. Formulas that are undefined there are left empty.
SmileApproximation evaluate(const MarketSlice& slice, double K, const AtomModel& model, const BoundsConfig& cfg);

}  // namespace atomiv::atom
