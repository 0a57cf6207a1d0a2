#pragma once

// Zero-rate Black-Scholes pricing and implied volatility.
//
// Out-of-the-money prices are also available as logarithms so that quotes far
// in the wings, which underflow as doubles, can still be inverted.

namespace atomiv::bs {

struct MarketSlice {
  double x0;  // spot
  double T;   // maturity in years
};

enum class OptionKind { Call, Put };

struct OptionQuote {
  double strike;
  OptionKind kind;
  double price;
};

struct D1D2 {
  double d1;
  double d2;
};

/// Throws DomainError unless x0 > 0 and T > 0.
void validate(const MarketSlice& slice);

D1D2 d1_d2(const MarketSlice& slice, double K, double sigma);

double bs_price(const MarketSlice& slice, double K, double sigma, OptionKind kind);

/// log of the out-of-the-money price: the put for K < x0, the call otherwise.
double log_otm_price(const MarketSlice& slice, double K, double sigma);

double vega(const MarketSlice& slice, double K, double sigma);

/// Implied volatility of a quote. Throws NoSolution when the price is not
/// strictly inside the no-arbitrage band.
double implied_vol(const MarketSlice& slice, const OptionQuote& quote);

/// Implied volatility from the logarithm of the out-of-the-money price at K.
double implied_vol_from_log_otm(const MarketSlice& slice, double K, double log_price);

}  // namespace atomiv::bs
