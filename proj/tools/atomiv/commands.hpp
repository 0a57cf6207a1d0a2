#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace atomiv::cli {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

struct CompareRow {
  double k;
  double K;
  std::optional<double> exact_iv;
  std::optional<double> mc_iv;
  std::optional<double> mc_se;
  std::optional<double> leading;
  std::optional<double> three_term_atom;
  std::optional<double> three_term_pT;
  std::optional<double> three_term_G;
  std::optional<double> dmhj;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> err_three_term;
  std::optional<double> err_dmhj;
};

const std::vector<std::string>& compare_header();

/// Formula columns on the grid; `with_exact` adds the quadrature oracle and
/// `with_mc` the simulated smile (which degrades to empty cells on failure).
std::vector<CompareRow> compare_rows(const RunConfig& cfg, bool with_exact, bool with_mc, std::ostream& diag);

/// Output bytes of a subcommand (mass, smile, compare, mc, bounds).
std::string run_command(const std::string& name, const RunConfig& cfg, std::ostream& diag);

/// Whole front end: argument parsing, config loading, dispatch and exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace atomiv::cli
