#pragma once

#include <map>
#include <string>
#include <vector>

#include "atomiv/atom_asymptotics.hpp"
#include "atomiv/cev.hpp"
#include "atomiv/montecarlo.hpp"

// Run configuration for the command-line tool. Files use a TOML-like subset:
// [section] headers, `key = value` lines, `#` comments, numbers, booleans,
// quoted strings and flat numeric arrays. Keys are addressed by their dotted
// name (`model.sigma`), which is also the name of the overriding flag.

namespace atomiv::cli {

enum class Format { Csv, Svg };

struct ModelSection {
  // Either a CEV model (sigma, rho) or an explicit mass with an optional
  // tabulated P(0 < X_T <= K).
  bool is_cev = true;
  double s0 = 0.0;
  double T = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double mass = 0.0;
  std::vector<double> p_tilde_strikes;
  std::vector<double> p_tilde_values;

  cev::CevParams cev_params() const { return {s0, sigma, rho, T}; }
};

struct GridSection {
  double k_min = -10.0;
  double k_max = -2.0;
  int n_points = 9;

  std::vector<double> ks() const;
};

struct RunConfig {
  ModelSection model;
  GridSection grid;
  mc::McConfig mc;
  bool mc_enabled = true;
  atom::BoundsConfig bounds;
  std::string out;  // empty: standard output
  Format format = Format::Csv;
};

using RawConfig = std::map<std::string, std::string>;

RawConfig parse_config_text(const std::string& text, const std::string& origin);
RawConfig read_config_file(const std::string& path);

/// Every accepted dotted key, in documentation order.
const std::vector<std::string>& known_keys();

/// Typed view of the raw values. Throws ConfigError on unknown keys,
/// malformed values or missing model fields.
RunConfig build_config(const RawConfig& raw);

void validate_grid(const GridSection& grid);

}  // namespace atomiv::cli
