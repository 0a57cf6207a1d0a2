#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "atomiv/errors.hpp"
#include "output.hpp"

namespace atomiv::cli {

namespace {

// Piecewise-linear P(0 < X_T <= K) through the origin, flat after the last
// node; its integral gives the continuous part of the put.
class TabulatedPTilde {
 public:
  TabulatedPTilde(std::vector<double> strikes, std::vector<double> values)
      : k_(std::move(strikes)), v_(std::move(values)), cumulative_(k_.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k_.size(); ++i) {
      const double k0 = i ? k_[i - 1] : 0.0;
      const double v0 = i ? v_[i - 1] : 0.0;
      acc += 0.5 * (v0 + v_[i]) * (k_[i] - k0);
      cumulative_[i] = acc;
    }
  }

  double operator()(double K) const {
    if (k_.empty() || K <= 0.0) return 0.0;
    const auto i = static_cast<std::size_t>(std::upper_bound(k_.begin(), k_.end(), K) - k_.begin());
    if (i == k_.size()) return v_.back();
    const double k0 = i ? k_[i - 1] : 0.0;
    const double v0 = i ? v_[i - 1] : 0.0;
    return v0 + (v_[i] - v0) * (K - k0) / (k_[i] - k0);
  }

  double integral(double K) const {
    if (k_.empty() || K <= 0.0) return 0.0;
    const auto i = static_cast<std::size_t>(std::upper_bound(k_.begin(), k_.end(), K) - k_.begin());
    if (i == k_.size()) return cumulative_.back() + v_.back() * (K - k_.back());
    const double k0 = i ? k_[i - 1] : 0.0;
    const double v0 = i ? v_[i - 1] : 0.0;
    const double base = i ? cumulative_[i - 1] : 0.0;
    return base + 0.5 * (v0 + (*this)(K)) * (K - k0);
  }

 private:
  std::vector<double> k_;
  std::vector<double> v_;
  std::vector<double> cumulative_;
};

struct ModelView {
  bs::MarketSlice slice;
  atom::AtomModel model;
  std::optional<cev::CevDistribution> cev;
};

cev::CevParams checked_cev(const ModelSection& m) {
  const auto p = m.cev_params();
  try {
    cev::validate(p);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return p;
}

ModelView make_model(const RunConfig& cfg) {
  const ModelSection& m = cfg.model;
  ModelView view{{m.s0, m.T}, {}, std::nullopt};
  if (m.is_cev) {
    view.cev.emplace(checked_cev(m));
    view.model = view.cev->atom_model();
    return view;
  }
  view.model.mass = m.mass;
  if (!m.p_tilde_strikes.empty()) {
    auto table = std::make_shared<TabulatedPTilde>(m.p_tilde_strikes, m.p_tilde_values);
    const double mass = m.mass;
    view.model.p_tilde = [table](double K) { return (*table)(K); };
    view.model.put = [table, mass](double K) { return mass * K + table->integral(K); };
  }
  return view;
}

const cev::CevDistribution& require_cev(const ModelView& view, const char* command) {
  if (!view.cev) throw ConfigError(std::string(command) + " needs a CEV model section (sigma, rho)");
  return *view.cev;
}

std::optional<double> normalized(std::optional<double> iv, double k, double T) {
  if (!iv) return std::nullopt;
  return *iv * std::sqrt(T) / std::fabs(k);
}

std::vector<Series> normalized_series(const std::vector<CompareRow>& rows, double T,
                                      const std::vector<std::pair<std::string, std::optional<double> CompareRow::*>>& cols) {
  static const char* palette[] = {"#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  std::vector<Series> out;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    Series s;
    s.name = cols[c].first;
    s.color = palette[c % 8];
    for (const auto& r : rows) {
      s.x.push_back(r.k);
      s.y.push_back(normalized(r.*(cols[c].second), r.k, T));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  CsvWriter csv(compare_header());
  for (const auto& r : rows) {
    csv.row({csv_number(r.k), csv_number(r.K), csv_number(r.exact_iv), csv_number(r.mc_iv), csv_number(r.mc_se),
             csv_number(r.leading), csv_number(r.three_term_atom), csv_number(r.three_term_pT),
             csv_number(r.three_term_G), csv_number(r.dmhj), csv_number(r.lower), csv_number(r.upper),
             csv_number(r.err_three_term), csv_number(r.err_dmhj)});
  }
  return csv.str();
}

std::string cmd_mass(const RunConfig& cfg) {
  if (cfg.format == Format::Svg) throw ConfigError("mass produces a table only; use --format csv");
  CsvWriter csv({"quantity", "value"});
  if (cfg.model.is_cev) {
    const cev::CevDistribution dist(checked_cev(cfg.model));
    csv.row({"mass", csv_number(dist.mass())});
    csv.row({"gamma_shape", csv_number(dist.gamma_shape())});
    csv.row({"gamma_argument", csv_number(dist.gamma_argument())});
    csv.row({"c_tilde", csv_number(dist.c_tilde())});
  } else {
    csv.row({"mass", csv_number(cfg.model.mass)});
  }
  return csv.str();
}

std::string cmd_smile(const RunConfig& cfg, std::ostream& diag) {
  const auto rows = compare_rows(cfg, false, false, diag);
  if (cfg.format == Format::Csv) return compare_csv(rows);
  return render_svg("Small-strike smile approximations", "log-moneyness k", "sigma * sqrt(T) / |k|",
                    normalized_series(rows, cfg.model.T,
                                      {{"leading", &CompareRow::leading},
                                       {"three-term (atom)", &CompareRow::three_term_atom},
                                       {"three-term (p_T)", &CompareRow::three_term_pT},
                                       {"three-term (G)", &CompareRow::three_term_G},
                                       {"dmhj", &CompareRow::dmhj},
                                       {"lower bound", &CompareRow::lower},
                                       {"upper bound", &CompareRow::upper}}));
}

std::string cmd_compare(const RunConfig& cfg, std::ostream& diag) {
  const auto rows = compare_rows(cfg, true, cfg.mc_enabled, diag);
  if (cfg.format == Format::Csv) return compare_csv(rows);
  auto series = normalized_series(rows, cfg.model.T,
                                  {{"exact (quadrature)", &CompareRow::exact_iv},
                                   {"three-term (atom)", &CompareRow::three_term_atom},
                                   {"dmhj", &CompareRow::dmhj}});
  Series mc;
  mc.name = "Monte Carlo";
  mc.color = "#1f77b4";
  mc.markers = true;
  for (const auto& r : rows) {
    mc.x.push_back(r.k);
    mc.y.push_back(normalized(r.mc_iv, r.k, cfg.model.T));
    mc.err.push_back(normalized(r.mc_se, r.k, cfg.model.T));
  }
  series.push_back(std::move(mc));
  return render_svg("Normalized smile: oracle, Monte Carlo and approximations", "log-moneyness k",
                    "sigma * sqrt(T) / |k|", series);
}

std::string cmd_mc(const RunConfig& cfg) {
  validate_grid(cfg.grid);
  if (!cfg.model.is_cev) throw ConfigError("mc needs a CEV model section (sigma, rho)");
  const mc::SimParams p{cfg.model.s0, cfg.model.sigma, cfg.model.rho, cfg.model.T};
  try {
    mc::validate(p, cfg.mc);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const auto ks = cfg.grid.ks();
  const auto sample = mc::simulate_terminals(p, cfg.mc);
  const auto est = mc::mc_smile(sample, p, ks);
  if (cfg.format == Format::Svg) {
    Series s;
    s.name = "Monte Carlo";
    s.color = "#1f77b4";
    s.markers = true;
    for (const auto& e : est) {
      s.x.push_back(e.k);
      s.y.push_back(e.normalized_iv);
      s.err.push_back(e.normalized_std_err);
    }
    return render_svg("Monte Carlo normalized smile", "log-moneyness k", "sigma * sqrt(T) / |k|", {s});
  }
  CsvWriter csv({"k", "K", "price", "std_err", "iv", "normalized_iv", "normalized_std_err", "n_paths", "n_absorbed",
                 "absorbed_fraction", "absorbed_std_err"});
  for (const auto& e : est) {
    csv.row({csv_number(e.k), csv_number(e.K), csv_number(e.price), csv_number(e.std_err), csv_number(e.iv),
             csv_number(e.normalized_iv), csv_number(e.normalized_std_err), std::to_string(cfg.mc.n_paths),
             std::to_string(e.n_absorbed), csv_number(sample.absorbed_fraction()),
             csv_number(sample.absorbed_std_err())});
  }
  return csv.str();
}

std::string cmd_bounds(const RunConfig& cfg) {
  validate_grid(cfg.grid);
  const ModelView view = make_model(cfg);
  struct Row {
    double k, K;
    std::optional<double> exact, lower, upper, first_lower_k;
  };
  std::vector<Row> rows;
  for (double k : cfg.grid.ks()) {
    Row r{k, cfg.model.s0 * std::exp(k), {}, {}, {}, {}};
    try {
      r.upper = atom::smile_upper_bound(view.slice, r.K, view.model);
    } catch (const DomainError&) {
    }
    try {
      r.lower = atom::smile_lower_bound(view.slice, r.K, view.model, cfg.bounds);
    } catch (const DomainBelow& e) {
      if (std::isfinite(e.minimal_log_k())) r.first_lower_k = -e.minimal_log_k();
    } catch (const DomainError&) {
    }
    if (view.cev) r.exact = view.cev->exact_smile(r.K);
    rows.push_back(r);
  }
  if (cfg.format == Format::Svg) {
    std::vector<CompareRow> as_compare;
    for (const auto& r : rows) {
      CompareRow c{};
      c.k = r.k;
      c.K = r.K;
      c.exact_iv = r.exact;
      c.lower = r.lower;
      c.upper = r.upper;
      as_compare.push_back(c);
    }
    return render_svg("Two-sided bounds", "log-moneyness k", "sigma * sqrt(T) / |k|",
                      normalized_series(as_compare, cfg.model.T,
                                        {{"exact (quadrature)", &CompareRow::exact_iv},
                                         {"lower bound", &CompareRow::lower},
                                         {"upper bound", &CompareRow::upper}}));
  }
  CsvWriter csv({"k", "K", "exact_iv", "lower", "upper", "sandwich", "lower_first_defined_k"});
  for (const auto& r : rows) {
    std::string sandwich;
    if (r.exact && r.lower && r.upper) sandwich = (*r.lower <= *r.exact && *r.exact <= *r.upper) ? "1" : "0";
    csv.row({csv_number(r.k), csv_number(r.K), csv_number(r.exact), csv_number(r.lower), csv_number(r.upper), sandwich,
             csv_number(r.first_lower_k)});
  }
  return csv.str();
}

}  // namespace

const std::vector<std::string>& compare_header() {
  static const std::vector<std::string> header = {
      "k",    "K",     "exact_iv", "mc_iv", "mc_se",          "leading", "three_term_atom", "three_term_pT",
      "three_term_G", "dmhj", "lower", "upper", "err_three_term", "err_dmhj"};
  return header;
}

std::vector<CompareRow> compare_rows(const RunConfig& cfg, bool with_exact, bool with_mc, std::ostream& diag) {
  validate_grid(cfg.grid);
  const ModelView view = make_model(cfg);
  const auto ks = cfg.grid.ks();
  std::vector<CompareRow> rows;
  rows.reserve(ks.size());
  for (double k : ks) {
    const double K = cfg.model.s0 * std::exp(k);
    const auto a = atom::evaluate(view.slice, K, view.model, cfg.bounds);
    CompareRow r{};
    r.k = k;
    r.K = K;
    r.leading = a.leading;
    r.three_term_atom = a.three_term_atom;
    r.three_term_pT = a.three_term_pT;
    r.three_term_G = a.three_term_G;
    r.dmhj = a.dmhj;
    r.lower = a.lower;
    r.upper = a.upper;
    rows.push_back(r);
  }
  if (with_exact) {
    const auto& dist = require_cev(view, "compare");
    for (auto& r : rows) {
      r.exact_iv = dist.exact_smile(r.K);
      if (r.three_term_atom) r.err_three_term = std::fabs(*r.exact_iv - *r.three_term_atom);
      if (r.dmhj) r.err_dmhj = std::fabs(*r.exact_iv - *r.dmhj);
    }
  }
  if (with_mc) {
    try {
      const auto est = mc::mc_smile(mc::sim_params(view.cev->params()), cfg.mc, ks);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].mc_iv = est[i].iv;
        if (est[i].normalized_std_err) {
          rows[i].mc_se = *est[i].normalized_std_err * std::fabs(est[i].k) / std::sqrt(cfg.model.T);
        }
      }
    } catch (const Error& e) {
      diag << "atomiv: warning: Monte Carlo skipped: " << e.what() << '\n';
    }
  }
  return rows;
}

std::string run_command(const std::string& name, const RunConfig& cfg, std::ostream& diag) {
  if (name == "mass") return cmd_mass(cfg);
  if (name == "smile") return cmd_smile(cfg, diag);
  if (name == "compare") return cmd_compare(cfg, diag);
  if (name == "mc") return cmd_mc(cfg);
  if (name == "bounds") return cmd_bounds(cfg);
  throw ConfigError("unknown command " + name);
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small-strike implied volatility for models with an atom at zero"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    std::string config;
    std::string out;
    std::string format;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"mass", "Probability of absorption at zero and the gamma arguments"},
      {"smile", "Formula table over the strike grid"},
      {"compare", "Formulas against the quadrature oracle and Monte Carlo"},
      {"mc", "Monte Carlo smile estimates"},
      {"bounds", "Two-sided bounds against the oracle"},
  };
  std::vector<std::unique_ptr<Sub>> subs;
  for (const auto& [name, help] : commands) {
    auto sub = std::make_unique<Sub>();
    sub->app = app.add_subcommand(name, help);
    sub->app->add_option("--config", sub->config, "Configuration file");
    sub->app->add_option("--out", sub->out, "Output file (default: standard output)");
    sub->app->add_option("--format", sub->format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
    for (const auto& key : known_keys()) {
      sub->options[key] = sub->app->add_option("--" + key, sub->values[key], "Override " + key);
    }
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  const Sub* chosen = nullptr;
  for (const auto& s : subs) {
    if (s->app->parsed()) chosen = s.get();
  }
  try {
    RawConfig raw;
    if (!chosen->config.empty()) raw = read_config_file(chosen->config);
    for (const auto& [key, opt] : chosen->options) {
      if (opt->count() == 0) continue;
      // rho and beta name the same field; an override of either replaces both.
      if (key == "model.rho") raw.erase("model.beta");
      if (key == "model.beta") raw.erase("model.rho");
      raw[key] = chosen->values.at(key);
    }
    if (!chosen->format.empty()) raw["output.format"] = chosen->format;
    if (!chosen->out.empty()) raw["output.path"] = chosen->out;
    const RunConfig cfg = build_config(raw);
    const std::string text = run_command(chosen->app->get_name(), cfg, err);
    if (cfg.out.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
      if (!file) throw ConfigError("cannot open output file " + cfg.out);
      file << text;
      if (!file.flush()) throw ConfigError("cannot write output file " + cfg.out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "atomiv: error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "atomiv: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace atomiv::cli
