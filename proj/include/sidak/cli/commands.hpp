#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sidak/combinatorics.hpp"

namespace sidak::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitParse = 3,
  kExitTie = 4,
  kExitSizeBound = 5,
  kExitPrecision = 6,
};

/// Everything one invocation needs. Text fields hold the raw flag values;
/// `finalize` turns them into validated numbers before any work starts.
struct RunConfig {
  std::string command;     ///< "test", "tables critical", "simulate power", ...
  std::string m_text;      ///< empty when not given
  std::string n_text;
  std::string rho_text;
  std::string s_text;
  std::string r_text;
  std::string eta_text;
  std::string alpha_text = "0.05";
  std::uint64_t seed = 0;  ///< 0 selects the documented default
  long reps = 0;           ///< 0 selects the per-command default
  std::string format = "csv";
  std::optional<unsigned> precision;
  std::string x_path;
  std::string y_path;
  std::string input_path;
  std::string method = "auto";
  std::string ties = "error";
  std::string df = "matched";
  double epsilon = 0.05;

  std::vector<int> m;
  std::vector<int> n;
  std::vector<double> rho;
  std::vector<int> s;
  std::vector<int> r;
  std::vector<double> eta;
  BigRational alpha;
  PrecisionPolicy policy;

  /// Parses the lists and checks every numeric value. Throws DomainError.
  void finalize();
};

/// "6:25" (inclusive), "20:40:4", or "0,5,7".
std::vector<int> parse_int_list(std::string_view text);
/// The same syntax for reals; stepping is done in exact decimal arithmetic,
/// so "0:0.25:0.05" yields the same doubles as the literals 0, 0.05, ..., 0.25.
std::vector<double> parse_real_list(std::string_view text);

/// A rectangular result with metadata, rendered as CSV or JSON.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  /// Two-column field/value report; JSON renders it as one flat object.
  bool key_value = false;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

Table cmd_test(const RunConfig& config);
Table cmd_tables_critical(const RunConfig& config);
Table cmd_tables_power(const RunConfig& config);
Table cmd_tables_approx(const RunConfig& config);
Table cmd_simulate_power(const RunConfig& config);
Table cmd_simulate_contamination(const RunConfig& config);
Table cmd_simulate_figure_data(const RunConfig& config);
/// Sets `all_match` to false when some cell differs.
Table cmd_oracle(const RunConfig& config, bool& all_match);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sidak::cli
