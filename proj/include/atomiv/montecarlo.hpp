#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "atomiv/cev.hpp"

// Euler-Maruyama simulation of the CEV diffusion with absorption at zero.
//
// Normals come from Philox4x32-10 keyed by the seed, with counter
// (path, step), so every path is an independent substream: results do not
// depend on chunking, thread count or instruction set.

namespace atomiv::mc {

enum class Isa { Auto, Scalar, Avx2, Reference };

struct McConfig {
  std::uint64_t n_paths = 10000;
  std::uint32_t n_steps = 100;
  std::uint64_t seed = 1;
  bool antithetic = false;
  Isa isa = Isa::Auto;
  unsigned threads = 1;
  std::uint64_t chunk_paths = 8192;
};

/// Simulation inputs. Unlike CevParams, sigma = 0 is allowed here.
struct SimParams {
  double s0;
  double sigma;
  double rho;
  double T;
};

SimParams sim_params(const cev::CevParams& p);

struct Terminals {
  std::vector<double> values;
  std::uint64_t n_absorbed = 0;
  bool antithetic = false;

  double absorbed_fraction() const;
  /// Binomial standard error of absorbed_fraction().
  double absorbed_std_err() const;
};

struct PriceEstimate {
  double price;
  double std_err;
};

struct McSmileEstimate {
  double k;
  double K;
  double price;
  double std_err;
  std::optional<double> iv;
  std::optional<double> normalized_iv;  // iv * sqrt(T) / |k|
  std::optional<double> normalized_std_err;
  std::uint64_t n_absorbed;
};

void validate(const SimParams& p, const McConfig& cfg);

bool avx2_available();

/// The instruction set `simulate_terminals` will use for `requested`.
Isa resolve_isa(Isa requested);

const char* isa_name(Isa isa);

Terminals simulate_terminals(const SimParams& p, const McConfig& cfg);

/// Mean and standard error of (K - S_T)^+. Antithetic samples are averaged in
/// pairs first.
PriceEstimate mc_put_price(const Terminals& sample, double K);

/// Implied-volatility smile at K = s0 e^k for each (negative) k. Points whose
/// price leaves the no-arbitrage band are returned without an iv.
std::vector<McSmileEstimate> mc_smile(const Terminals& sample, const SimParams& p, std::span<const double> k_grid);
std::vector<McSmileEstimate> mc_smile(const SimParams& p, const McConfig& cfg, std::span<const double> k_grid);

}  // namespace atomiv::mc
