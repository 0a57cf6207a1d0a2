#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "atomiv/errors.hpp"

namespace atomiv::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw ConfigError("config: " + key + " = '" + value + "' is not " + expected);
}

double to_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const char* end = value.data() + value.size();
  const char* begin = value.data();
  if (begin != end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, x);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) bad_value(key, value, "a finite number");
  return x;
}

std::uint64_t to_count(const std::string& key, const std::string& value) {
  std::uint64_t n = 0;
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, n);
  if (res.ec != std::errc() || res.ptr != end) bad_value(key, value, "a non-negative integer");
  return n;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "a boolean");
}

std::vector<double> to_array(const std::string& key, const std::string& value) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') bad_value(key, value, "an array");
  std::vector<double> out;
  std::stringstream items(value.substr(1, value.size() - 2));
  std::string item;
  while (std::getline(items, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(key, item));
  }
  return out;
}

}  // namespace

std::vector<double> GridSection::ks() const {
  std::vector<double> ks(static_cast<std::size_t>(n_points));
  const double step = (k_max - k_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) ks[i] = i + 1 == n_points ? k_max : k_min + i * step;
  return ks;
}

RawConfig parse_config_text(const std::string& text, const std::string& origin) {
  RawConfig raw;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    const std::string full = section.empty() ? key : section + "." + key;
    if (!raw.emplace(full, value).second) throw ConfigError(where + "duplicate key " + full);
  }
  return raw;
}

RawConfig read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path);
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "model.s0",        "model.sigma",          "model.rho",           "model.beta",   "model.T",
      "model.mass",      "model.p_tilde_strikes", "model.p_tilde_values", "grid.k_min",   "grid.k_max",
      "grid.n_points",   "mc.enabled",           "mc.n_paths",          "mc.n_steps",   "mc.seed",
      "mc.antithetic",   "mc.isa",               "mc.threads",          "mc.chunk_paths", "bounds.epsilon",
      "output.path",     "output.format",
  };
  return keys;
}

RunConfig build_config(const RawConfig& raw) {
  const auto& keys = known_keys();
  for (const auto& [key, value] : raw) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("config: unknown key " + key);
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };
  auto number = [&](const std::string& key, double& slot) {
    if (const auto* v = get(key)) slot = to_double(key, *v);
  };

  RunConfig cfg;
  ModelSection& m = cfg.model;
  if (get("model.rho") && get("model.beta")) throw ConfigError("config: give model.rho or model.beta, not both");
  const bool has_mass = get("model.mass") != nullptr;
  const bool has_cev = get("model.sigma") || get("model.rho") || get("model.beta");
  if (has_mass && has_cev) throw ConfigError("config: model.mass excludes the CEV fields sigma and rho");
  m.is_cev = !has_mass;
  for (const char* key : {"model.s0", "model.T"}) {
    if (!get(key)) throw ConfigError(std::string("config: missing ") + key);
  }
  number("model.s0", m.s0);
  number("model.T", m.T);
  if (!(m.s0 > 0.0)) throw ConfigError("config: model.s0 must be positive");
  if (!(m.T > 0.0)) throw ConfigError("config: model.T must be positive");
  if (m.is_cev) {
    if (!get("model.sigma")) throw ConfigError("config: missing model.sigma");
    if (!get("model.rho") && !get("model.beta")) throw ConfigError("config: missing model.rho (or model.beta)");
    number("model.sigma", m.sigma);
    number("model.rho", m.rho);
    number("model.beta", m.rho);
    if (!(m.sigma >= 0.0)) throw ConfigError("config: model.sigma must be non-negative");
    if (!(m.rho > 0.0 && m.rho < 1.0)) throw ConfigError("config: model.rho must lie in (0, 1)");
    if (get("model.p_tilde_strikes") || get("model.p_tilde_values")) {
      throw ConfigError("config: tabulated p_tilde applies only to an explicit-mass model");
    }
  } else {
    number("model.mass", m.mass);
    if (!(m.mass > 0.0 && m.mass < 1.0)) throw ConfigError("config: model.mass must lie in (0, 1)");
    if (const auto* v = get("model.p_tilde_strikes")) m.p_tilde_strikes = to_array("model.p_tilde_strikes", *v);
    if (const auto* v = get("model.p_tilde_values")) m.p_tilde_values = to_array("model.p_tilde_values", *v);
    if (m.p_tilde_strikes.size() != m.p_tilde_values.size()) {
      throw ConfigError("config: model.p_tilde_strikes and model.p_tilde_values differ in length");
    }
    for (std::size_t i = 0; i < m.p_tilde_strikes.size(); ++i) {
      const double prev_k = i == 0 ? 0.0 : m.p_tilde_strikes[i - 1];
      const double prev_v = i == 0 ? 0.0 : m.p_tilde_values[i - 1];
      if (!(m.p_tilde_strikes[i] > prev_k)) throw ConfigError("config: p_tilde strikes must be positive and increasing");
      if (!(m.p_tilde_values[i] >= prev_v && m.p_tilde_values[i] <= 1.0 - m.mass)) {
        throw ConfigError("config: p_tilde values must be non-decreasing and at most 1 - mass");
      }
    }
  }

  number("grid.k_min", cfg.grid.k_min);
  number("grid.k_max", cfg.grid.k_max);
  if (const auto* v = get("grid.n_points")) {
    const auto n = to_count("grid.n_points", *v);
    if (n > 1000000) throw ConfigError("config: grid.n_points is unreasonably large");
    cfg.grid.n_points = static_cast<int>(n);
  }

  if (const auto* v = get("mc.enabled")) cfg.mc_enabled = to_bool("mc.enabled", *v);
  if (const auto* v = get("mc.n_paths")) cfg.mc.n_paths = to_count("mc.n_paths", *v);
  if (const auto* v = get("mc.n_steps")) {
    const auto n = to_count("mc.n_steps", *v);
    if (n > 0xffffffffull) throw ConfigError("config: mc.n_steps is too large");
    cfg.mc.n_steps = static_cast<std::uint32_t>(n);
  }
  if (const auto* v = get("mc.seed")) cfg.mc.seed = to_count("mc.seed", *v);
  if (const auto* v = get("mc.antithetic")) cfg.mc.antithetic = to_bool("mc.antithetic", *v);
  if (const auto* v = get("mc.threads")) {
    const auto n = to_count("mc.threads", *v);
    if (n == 0 || n > 1024) throw ConfigError("config: mc.threads must lie in [1, 1024]");
    cfg.mc.threads = static_cast<unsigned>(n);
  }
  if (const auto* v = get("mc.chunk_paths")) cfg.mc.chunk_paths = to_count("mc.chunk_paths", *v);
  if (const auto* v = get("mc.isa")) {
    if (*v == "auto") {
      cfg.mc.isa = mc::Isa::Auto;
    } else if (*v == "scalar") {
      cfg.mc.isa = mc::Isa::Scalar;
    } else if (*v == "avx2") {
      cfg.mc.isa = mc::Isa::Avx2;
    } else if (*v == "reference") {
      cfg.mc.isa = mc::Isa::Reference;
    } else {
      bad_value("mc.isa", *v, "one of auto, scalar, avx2, reference");
    }
  }

  number("bounds.epsilon", cfg.bounds.epsilon);
  if (!(cfg.bounds.epsilon > 0.0)) throw ConfigError("config: bounds.epsilon must be positive");

  if (const auto* v = get("output.path")) cfg.out = *v;
  if (const auto* v = get("output.format")) {
    if (*v == "csv") {
      cfg.format = Format::Csv;
    } else if (*v == "svg") {
      cfg.format = Format::Svg;
    } else {
      bad_value("output.format", *v, "csv or svg");
    }
  }
  return cfg;
}

void validate_grid(const GridSection& grid) {
  if (!(grid.k_min < grid.k_max && grid.k_max < 0.0)) {
    throw ConfigError("config: the grid needs k_min < k_max < 0");
  }
  if (grid.n_points < 2) throw ConfigError("config: grid.n_points must be at least 2");
}

}  // namespace atomiv::cli
