#include "atomiv/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "atomiv/blackscholes.hpp"
#include "atomiv/errors.hpp"
#include "mc/kernel.hpp"

namespace atomiv::mc {

namespace {

using KernelFn = void (*)(const detail::KernelArgs&, std::uint64_t, std::uint64_t, double*);

KernelFn kernel_for(Isa isa) {
  switch (isa) {
    case Isa::Avx2:
      return &detail::simulate_avx2;
    case Isa::Reference:
      return &detail::simulate_reference;
    default:
      return &detail::simulate_scalar;
  }
}

}  // namespace

SimParams sim_params(const cev::CevParams& p) { return {p.s0, p.sigma, p.rho, p.T}; }

double Terminals::absorbed_fraction() const {
  return values.empty() ? 0.0 : static_cast<double>(n_absorbed) / static_cast<double>(values.size());
}

double Terminals::absorbed_std_err() const {
  if (values.empty()) return 0.0;
  const double p = absorbed_fraction();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(values.size()));
}

void validate(const SimParams& p, const McConfig& cfg) {
  std::ostringstream os;
  if (!(p.s0 > 0.0) || !std::isfinite(p.s0)) os << "s0 must be positive; ";
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) os << "sigma must be non-negative; ";
  if (!(p.rho > 0.0 && p.rho < 1.0)) os << "rho must lie in (0, 1); ";
  if (!(p.T > 0.0) || !std::isfinite(p.T)) os << "T must be positive; ";
  if (cfg.n_paths < 1) os << "n_paths must be positive; ";
  if (cfg.n_steps < 1) os << "n_steps must be positive; ";
  if (cfg.antithetic && cfg.n_paths % 2 != 0) os << "antithetic sampling needs an even n_paths; ";
  if (cfg.chunk_paths < 1) os << "chunk_paths must be positive; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw DomainError("Monte Carlo: " + msg.substr(0, msg.size() - 2));
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return detail::avx2_compiled() && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa resolve_isa(Isa requested) {
  if (requested == Isa::Auto) return avx2_available() ? Isa::Avx2 : Isa::Scalar;
  if (requested == Isa::Avx2 && !avx2_available()) throw DomainError("AVX2 kernel requested but not available");
  return requested;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Auto:
      return "auto";
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Reference:
      return "reference";
  }
  return "?";
}

Terminals simulate_terminals(const SimParams& p, const McConfig& cfg) {
  validate(p, cfg);
  const KernelFn kernel = kernel_for(resolve_isa(cfg.isa));
  const detail::KernelArgs args{p.s0, p.sigma, p.rho, std::sqrt(p.T / cfg.n_steps), cfg.n_steps, cfg.seed,
                                cfg.antithetic};
  Terminals out;
  out.antithetic = cfg.antithetic;
  out.values.resize(cfg.n_paths);
  const std::uint64_t n_chunks = (cfg.n_paths + cfg.chunk_paths - 1) / cfg.chunk_paths;
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < n_chunks; c = next++) {
      const std::uint64_t first = c * cfg.chunk_paths;
      const std::uint64_t count = std::min(cfg.chunk_paths, cfg.n_paths - first);
      kernel(args, first, count, out.values.data() + first);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(n_chunks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (double v : out.values) out.n_absorbed += v == 0.0;
  return out;
}

PriceEstimate mc_put_price(const Terminals& sample, double K) {
  if (!(K > 0.0)) throw DomainError("mc_put_price needs K > 0");
  const auto& v = sample.values;
  if (v.empty()) throw DomainError("mc_put_price: empty sample");
  const std::size_t stride = sample.antithetic ? 2 : 1;
  const std::size_t n = v.size() / stride;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double payoff = std::fmax(K - v[stride * i], 0.0);
    if (stride == 2) payoff = 0.5 * (payoff + std::fmax(K - v[2 * i + 1], 0.0));
    sum += payoff;
    sum_sq += payoff * payoff;
  }
  const double mean = sum / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  const double var = std::fmax(sum_sq / static_cast<double>(n) - mean * mean, 0.0) * n / (n - 1.0);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

std::vector<McSmileEstimate> mc_smile(const Terminals& sample, const SimParams& p, std::span<const double> k_grid) {
  const bs::MarketSlice slice{p.s0, p.T};
  std::vector<McSmileEstimate> rows;
  rows.reserve(k_grid.size());
  for (double k : k_grid) {
    if (!(k < 0.0)) throw DomainError("mc_smile: log-moneyness must be negative");
    McSmileEstimate row{};
    row.k = k;
    row.K = p.s0 * std::exp(k);
    const PriceEstimate est = mc_put_price(sample, row.K);
    row.price = est.price;
    row.std_err = est.std_err;
    row.n_absorbed = sample.n_absorbed;
    try {
      const double iv = bs::implied_vol(slice, {row.K, bs::OptionKind::Put, est.price});
      row.iv = iv;
      row.normalized_iv = iv * std::sqrt(p.T) / -k;
      // Delta method through the vega.
      const double vega = bs::vega(slice, row.K, iv);
      if (vega > 0.0) row.normalized_std_err = est.std_err / vega * std::sqrt(p.T) / -k;
    } catch (const NoSolution&) {
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<McSmileEstimate> mc_smile(const SimParams& p, const McConfig& cfg, std::span<const double> k_grid) {
  return mc_smile(simulate_terminals(p, cfg), p, k_grid);
}

}  // namespace atomiv::mc
