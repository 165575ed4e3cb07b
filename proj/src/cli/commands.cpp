#include "sidak/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "sidak/approximations.hpp"
#include "sidak/cli/io.hpp"
#include "sidak/errors.hpp"
#include "sidak/exceedance.hpp"
#include "sidak/lehmann.hpp"
#include "sidak/null_distribution.hpp"
#include "sidak/simulation.hpp"

namespace sidak::cli {
namespace {

constexpr int kExactPowerLimit = 40;
constexpr long kDefaultPowerReps = 100000;
constexpr long kDefaultContaminationReps = 1000;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_int(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw DomainError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

BigRational parse_decimal_checked(std::string_view text) {
  try {
    return parse_decimal(text);
  } catch (const Error&) {
    throw DomainError("not a decimal number: '" + std::string(text) + "'");
  }
}

std::string fixed(double value, int decimals) { return format_fixed(value, decimals); }
std::string fixed(const BigRational& value, int decimals) { return format_fixed(to_double(value), decimals); }

std::string rational_text(const BigRational& value) { return value.get_str(); }

std::uint64_t seed_of(const RunConfig& config) { return config.seed == 0 ? kDefaultSeed : config.seed; }

int single(const std::vector<int>& values, const char* flag) {
  if (values.size() != 1) throw DomainError(std::string(flag) + " takes a single value here");
  return values.front();
}

double single(const std::vector<double>& values, const char* flag) {
  if (values.size() != 1) throw DomainError(std::string(flag) + " takes a single value here");
  return values.front();
}

std::vector<int> m_values_or_n(const RunConfig& config) { return config.m.empty() ? config.n : config.m; }

void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

std::string method_name(PowerMethod method) { return method == PowerMethod::exact ? "exact" : "monte_carlo"; }

/// Auto picks exact computation when every sample size is at most 40.
PowerMethod choose_power_method(const RunConfig& config, int largest_size) {
  if (config.method == "exact") return PowerMethod::exact;
  if (config.method == "mc" || config.method == "monte_carlo") return PowerMethod::monte_carlo;
  return largest_size <= kExactPowerLimit ? PowerMethod::exact : PowerMethod::monte_carlo;
}

long reps_or(const RunConfig& config, long fallback) { return config.reps == 0 ? fallback : config.reps; }

double power_cell(int m, int n, const ThresholdSpec& spec, double eta, PowerMethod method,
                  const RunConfig& config) {
  spec.validate(m, n);
  if (method == PowerMethod::exact) {
    return power_exact(m, n, spec.s, spec.r, config.alpha, LehmannParam(eta), config.policy).beta;
  }
  return mc_power(m, n, spec, config.alpha, LehmannParam(eta), reps_or(config, kDefaultPowerReps),
                  RngSpec{seed_of(config), 1})
      .beta;
}

std::string eta_label(double eta) { return "eta=" + format_exact(eta); }

/// Rows (rho, eta), one column per n.
Table rho_power_grid(const RunConfig& config, PowerMethod method) {
  const int m = single(config.m, "--m");
  Table table;
  table.metadata = {{"method", method_name(method)}, {"m", std::to_string(m)}, {"alpha", rational_text(config.alpha)}};
  if (method == PowerMethod::monte_carlo) {
    table.metadata.emplace_back("reps", std::to_string(reps_or(config, kDefaultPowerReps)));
    table.metadata.emplace_back("seed", std::to_string(seed_of(config)));
  }
  table.columns = {"rho", "eta"};
  for (int n : config.n) table.columns.push_back("n=" + std::to_string(n));
  for (double rho : config.rho) {
    for (double eta : config.eta) {
      std::vector<std::string> row = {format_exact(rho), format_exact(eta)};
      for (int n : config.n) {
        row.push_back(fixed(power_cell(m, n, thresholds(m, n, rho), eta, method, config), 4));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string locate_tie(const SamplePair& sample, double value) {
  std::string where;
  const auto scan = [&](const std::vector<double>& data, const char* name) {
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (data[j] == value) {
        if (!where.empty()) where += ", ";
        where += std::string(name) + " row " + std::to_string(j + 1);
      }
    }
  };
  scan(sample.x(), "x");
  scan(sample.y(), "y");
  return where;
}

SamplePair load_sample(const RunConfig& config) {
  if (!config.input_path.empty()) {
    require(config.x_path.empty() && config.y_path.empty(), "give either --input or --x/--y, not both");
    return read_sample_json(config.input_path);
  }
  require(!config.x_path.empty() && !config.y_path.empty(), "test needs --input FILE.json or both --x and --y");
  auto x = read_column_csv(config.x_path);
  auto y = read_column_csv(config.y_path);
  return SamplePair(std::move(x), std::move(y));
}

ThresholdSpec test_thresholds(const RunConfig& config, int m, int n) {
  if (!config.s.empty() || !config.r.empty()) {
    require(!config.s.empty() && !config.r.empty(), "--s and --r must be given together");
    require(config.rho.empty(), "give either --rho or --s/--r, not both");
    ThresholdSpec spec{single(config.s, "--s"), single(config.r, "--r"), std::nullopt};
    spec.validate(m, n);
    return spec;
  }
  return thresholds(m, n, config.rho.empty() ? 0.0 : single(config.rho, "--rho"));
}

void json_scalar(const std::string& cell, nlohmann::ordered_json& out) {
  if (cell == "*" || cell == "n/a" || cell.empty()) {
    out = nullptr;
    return;
  }
  const char* end = cell.data() + cell.size();
  long long integer = 0;
  if (const auto [ptr, ec] = std::from_chars(cell.data(), end, integer); ec == std::errc{} && ptr == end) {
    out = integer;
    return;
  }
  double value = 0.0;
  if (const auto [ptr, ec] = std::from_chars(cell.data(), end, value); ec == std::errc{} && ptr == end) {
    out = value;
    return;
  }
  out = cell;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  require(!text.empty(), "empty list");
  std::vector<int> values;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    require(parts.size() <= 3, "bad range '" + std::string(item) + "'");
    if (parts.size() == 1) {
      values.push_back(parse_int(parts[0]));
      continue;
    }
    const int first = parse_int(parts[0]);
    const int last = parse_int(parts[1]);
    const int step = parts.size() == 3 ? parse_int(parts[2]) : 1;
    require(step > 0, "range step must be positive in '" + std::string(item) + "'");
    require(first <= last, "empty range '" + std::string(item) + "'");
    for (int v = first; v <= last; v += step) values.push_back(v);
  }
  return values;
}

std::vector<double> parse_real_list(std::string_view text) {
  require(!text.empty(), "empty list");
  std::vector<double> values;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    require(parts.size() <= 3, "bad range '" + std::string(item) + "'");
    if (parts.size() == 1) {
      values.push_back(to_double(parse_decimal_checked(parts[0])));
      continue;
    }
    const BigRational first = parse_decimal_checked(parts[0]);
    const BigRational last = parse_decimal_checked(parts[1]);
    const BigRational step = parts.size() == 3 ? parse_decimal_checked(parts[2]) : BigRational(1);
    require(step > 0, "range step must be positive in '" + std::string(item) + "'");
    require(first <= last, "empty range '" + std::string(item) + "'");
    for (BigRational v = first; v <= last; v += step) values.push_back(to_double(v));
  }
  return values;
}

void RunConfig::finalize() {
  if (!m_text.empty()) m = parse_int_list(m_text);
  if (!n_text.empty()) n = parse_int_list(n_text);
  if (!s_text.empty()) s = parse_int_list(s_text);
  if (!r_text.empty()) r = parse_int_list(r_text);
  if (!rho_text.empty()) rho = parse_real_list(rho_text);
  if (!eta_text.empty()) eta = parse_real_list(eta_text);
  alpha = parse_decimal_checked(alpha_text);

  for (int v : m) require(v >= 1, "--m values must be >= 1");
  for (int v : n) require(v >= 1, "--n values must be >= 1");
  for (int v : s) require(v >= 0, "--s values must be >= 0");
  for (int v : r) require(v >= 0, "--r values must be >= 0");
  for (double v : rho) require(v >= 0.0 && v < 1.0, "--rho values must lie in [0, 1)");
  for (double v : eta) require(std::isfinite(v) && v >= 1.0, "--eta values must be >= 1");
  require(alpha > 0 && alpha < 1, "--alpha must lie in (0, 1)");
  require(reps >= 0, "--reps must be positive");
  require(format == "csv" || format == "json", "--format must be csv or json");
  require(method == "auto" || method == "exact" || method == "approx" || method == "mc" || method == "monte_carlo",
          "--method must be auto, exact, approx or mc");
  require(ties == "error" || ties == "conservative", "--ties must be error or conservative");
  require(df == "matched" || df == "text", "--df must be matched or text");
  require(epsilon >= 0.0 && epsilon <= 1.0, "--epsilon must lie in [0, 1]");

  policy = PrecisionPolicy::from_environment();
  if (precision) policy.base_digits = *precision;
  policy.validate();
}

void Table::write_csv(std::ostream& out) const {
  CsvWriter writer(out);
  if (!metadata.empty()) {
    std::string line;
    for (const auto& [key, value] : metadata) {
      if (!line.empty()) line += ' ';
      line += key + "=" + value;
    }
    writer.comment(line);
  }
  writer.row(columns);
  for (const auto& row : rows) writer.row(row);
}

void Table::write_json(std::ostream& out) const {
  nlohmann::ordered_json doc;
  if (key_value) {
    doc = nlohmann::ordered_json::object();
    for (const auto& row : rows) json_scalar(row.at(1), doc[row.at(0)]);
    out << doc.dump(2) << '\n';
    return;
  }
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : metadata) doc["metadata"][key] = value;
  doc["columns"] = columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json item = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < columns.size() && j < row.size(); ++j) {
      json_scalar(row[j], item[columns[j]]);
    }
    doc["rows"].push_back(std::move(item));
  }
  out << doc.dump(2) << '\n';
}

Table cmd_test(const RunConfig& config) {
  const SamplePair sample = load_sample(config);
  const int m = sample.m();
  const int n = sample.n();
  const ThresholdSpec spec = test_thresholds(config, m, n);
  const TiePolicy ties = config.ties == "conservative" ? TiePolicy::conservative : TiePolicy::error;

  ExceedanceCounts counts;
  try {
    counts = exceedance_stats(sample, spec, ties);
  } catch (const TieError& e) {
    throw TieError(std::string(e.what()) + " (" + locate_tie(sample, e.value()) + ")", e.value());
  }

  const TestDecision decision = critical_value(m, n, spec.s, spec.r, config.alpha);
  const bool approx = config.method == "approx";
  std::string p_text;
  std::string p_exact = "n/a";
  if (approx) {
    const double p = counts.v == 0 ? 1.0 : 1.0 - nb_cdf_approx(counts.v - 1, spec.s);
    p_text = fixed(p, 7);
  } else {
    const BigRational p = p_value(m, n, spec.s, spec.r, counts.v);
    p_text = fixed(p, 7);
    p_exact = rational_text(p);
  }
  const BigRational reject = randomized_reject(counts.v, decision);
  std::string verdict = "do not reject";
  if (reject == 1) {
    verdict = "reject";
  } else if (reject > 0) {
    verdict = "randomize";
  }

  Table table;
  table.columns = {"field", "value"};
  table.key_value = true;
  const auto add = [&](std::string key, std::string value) { table.rows.push_back({std::move(key), std::move(value)}); };
  add("m", std::to_string(m));
  add("n", std::to_string(n));
  add("s", std::to_string(spec.s));
  add("r", std::to_string(spec.r));
  add("A", std::to_string(counts.a));
  add("B", std::to_string(counts.b));
  add("V", std::to_string(counts.v));
  add("method", approx ? "approx-negative-binomial" : "exact");
  add("p_value", p_text);
  add("p_value_exact", p_exact);
  add("alpha", rational_text(config.alpha));
  add("c", std::to_string(decision.c));
  add("critical_value", std::to_string(decision.c - 1));
  add("alpha1", fixed(decision.alpha1, 7));
  add("alpha2", fixed(decision.alpha2, 7));
  add("pi", fixed(decision.pi, 7));
  add("reject_probability", fixed(reject, 7));
  add("decision", verdict);

  const bool enumerable = m + n <= kMaxEnumerationSize;
  const auto companion = [&](const char* name, std::string value, CompanionStatistic statistic) {
    add(name, std::move(value));
    add(std::string(name) + "_p_value",
        enumerable ? fixed(permutation_pvalue(sample, statistic, spec, ties), 7) : std::string("n/a"));
  };
  companion("P", std::to_string(precedence_statistic(sample, spec.r, ties)), CompanionStatistic::precedence);
  companion("Q", std::to_string(maximal_precedence(sample, spec.r, ties)), CompanionStatistic::maximal_precedence);
  companion("M", std::to_string(m_statistic(sample, spec, ties)), CompanionStatistic::m_statistic);
  companion("W", format_exact(wilcoxon_rank_sum(sample)), CompanionStatistic::wilcoxon);
  return table;
}

Table cmd_tables_critical(const RunConfig& config) {
  require(!config.n.empty(), "tables critical needs --n");
  Table table;
  table.metadata = {{"alpha", rational_text(config.alpha)}, {"rule", "reject when V > critical_value"}};

  if (!config.rho.empty()) {
    const int m = single(config.m, "--m");
    table.columns = {"rho", "m", "n", "s", "r", "critical_value", "alpha1", "alpha2", "pi"};
    for (double rho : config.rho) {
      for (int n : config.n) {
        const ThresholdSpec spec = thresholds(m, n, rho);
        std::vector<std::string> row = {format_exact(rho), std::to_string(m), std::to_string(n),
                                        std::to_string(spec.s), std::to_string(spec.r)};
        const TestDecision d = critical_value(m, n, spec.s, spec.r, config.alpha);
        if (d.degenerate) {
          row.insert(row.end(), {"*", "*", "*", "*"});
        } else {
          row.insert(row.end(), {std::to_string(d.c - 1), fixed(d.alpha1, 6), fixed(d.alpha2, 6), fixed(d.pi, 6)});
        }
        table.rows.push_back(std::move(row));
      }
    }
    return table;
  }

  // s = r grid, one row per n.
  require(!config.r.empty(), "tables critical needs --r or --rho");
  require(config.m.empty() || config.m.size() == 1, "--m takes a single value here");
  table.columns = {"n"};
  for (int r : config.r) table.columns.push_back("r=" + std::to_string(r));
  for (int n : config.n) {
    const int m = config.m.empty() ? n : config.m.front();
    std::vector<std::string> row = {std::to_string(n)};
    for (int r : config.r) {
      if (r >= n || r >= m) {
        row.emplace_back("*");
        continue;
      }
      const TestDecision d = critical_value(m, n, r, r, config.alpha);
      row.push_back(d.degenerate ? std::string("*") : std::to_string(d.c - 1));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table cmd_tables_power(const RunConfig& config) {
  require(!config.n.empty(), "tables power needs --n");
  require(!config.eta.empty(), "tables power needs --eta");
  const std::vector<int> ms = m_values_or_n(config);
  const int largest = std::max(*std::max_element(ms.begin(), ms.end()),
                               *std::max_element(config.n.begin(), config.n.end()));
  require(config.method != "approx", "--method approx does not apply to power tables");
  const PowerMethod method = choose_power_method(config, largest);

  if (!config.rho.empty()) {
    RunConfig adjusted = config;
    adjusted.m = {single(ms, "--m")};
    return rho_power_grid(adjusted, method);
  }

  // s = r rows, one column per eta.
  require(!config.r.empty(), "tables power needs --r or --rho");
  Table table;
  table.metadata = {{"method", method_name(method)}, {"alpha", rational_text(config.alpha)}};
  if (method == PowerMethod::monte_carlo) {
    table.metadata.emplace_back("reps", std::to_string(reps_or(config, kDefaultPowerReps)));
    table.metadata.emplace_back("seed", std::to_string(seed_of(config)));
  }
  table.columns = {"m", "n", "r"};
  for (double eta : config.eta) table.columns.push_back(eta_label(eta));
  for (int n : config.n) {
    const int m = config.m.empty() ? n : single(config.m, "--m");
    for (int r : config.r) {
      std::vector<std::string> row = {std::to_string(m), std::to_string(n), std::to_string(r)};
      for (double eta : config.eta) {
        row.push_back(fixed(power_cell(m, n, ThresholdSpec{r, r, std::nullopt}, eta, method, config), 4));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

Table cmd_tables_approx(const RunConfig& config) {
  require(!config.m.empty(), "tables approx needs --m");
  require(!config.rho.empty(), "tables approx needs --rho");
  const ApproxConfig approx{config.df == "text" ? ChiSquareDf::text : ChiSquareDf::matched};
  Table table;
  table.metadata = {{"alpha", rational_text(config.alpha)}, {"df", config.df}};
  table.columns = {"m", "rho", "s", "critical_value", "df", "chisq_approx", "exact_tail"};
  for (int m : config.m) {
    for (double rho : config.rho) {
      const ThresholdSpec spec = thresholds(m, m, rho);
      const TestDecision d = critical_value(m, m, spec.s, spec.r, config.alpha);
      const int cv = d.c - 1;
      table.rows.push_back({std::to_string(m), format_exact(rho), std::to_string(spec.s), std::to_string(cv),
                            format_exact(chisq_degrees_of_freedom(m, rho, approx)),
                            fixed(chisq_tail_approx(cv, m, rho, approx), 4), fixed(d.alpha1, 4)});
    }
  }
  return table;
}

Table cmd_simulate_power(const RunConfig& config) {
  require(!config.n.empty() && !config.m.empty(), "simulate power needs --m and --n");
  require(!config.rho.empty(), "simulate power needs --rho");
  require(!config.eta.empty(), "simulate power needs --eta");
  return rho_power_grid(config, PowerMethod::monte_carlo);
}

Table cmd_simulate_contamination(const RunConfig& config) {
  const int m = config.m.empty() ? 100 : single(config.m, "--m");
  const int n = config.n.empty() ? m : single(config.n, "--n");
  const std::vector<double> rhos = config.rho.empty() ? parse_real_list("0:0.25:0.05") : config.rho;
  ContaminationSpec spec = ContaminationSpec::outlier_example();
  spec.epsilon = config.epsilon;
  const long reps = reps_or(config, kDefaultContaminationReps);
  const auto rows = contamination_experiment(m, n, spec, rhos, config.alpha, reps, RngSpec{seed_of(config), 1});

  Table table;
  table.metadata = {{"method", "monte_carlo"},
                    {"m", std::to_string(m)},
                    {"n", std::to_string(n)},
                    {"epsilon", format_exact(spec.epsilon)},
                    {"alpha", rational_text(config.alpha)},
                    {"reps", std::to_string(reps)},
                    {"seed", std::to_string(seed_of(config))}};
  table.columns = {"rho", "s", "r", "critical_value", "rejection_rate", "std_error"};
  for (const auto& row : rows) {
    table.rows.push_back({format_exact(row.rho), std::to_string(row.s), std::to_string(row.r),
                          std::to_string(row.c - 1), fixed(row.rejection_rate, 4), fixed(row.std_error, 4)});
  }
  return table;
}

Table cmd_simulate_figure_data(const RunConfig& config) {
  const int m = config.m.empty() ? 200 : single(config.m, "--m");
  const int n = config.n.empty() ? m : single(config.n, "--n");
  const double rho = config.rho.empty() ? 0.01 : single(config.rho, "--rho");
  const ThresholdSpec spec = thresholds(m, n, rho);
  const ApproxConfig approx{config.df == "text" ? ChiSquareDf::text : ChiSquareDf::matched};
  const auto null = null_v_distribution(m, n, spec.s, spec.r);

  Table table;
  table.metadata = {{"m", std::to_string(m)}, {"n", std::to_string(n)}, {"rho", format_exact(rho)},
                    {"s", std::to_string(spec.s)}, {"r", std::to_string(spec.r)}, {"df", config.df}};
  table.columns = {"z", "exact_cdf", "nb_cdf", "chisq_tail"};
  for (int z = 0; z <= m + n; ++z) {
    table.rows.push_back({std::to_string(z), fixed(null->cdf(z), 8), fixed(nb_cdf_approx(z, spec.s), 8),
                          fixed(chisq_tail_approx(z, m, rho, approx), 8)});
  }
  return table;
}

Table cmd_oracle(const RunConfig& config, bool& all_match) {
  const int m = single(config.m, "--m");
  const int n = single(config.n, "--n");
  const ThresholdSpec spec = test_thresholds(config, m, n);
  const NullJointTable enumerated = permutation_oracle(m, n, spec.s, spec.r);
  const NullJointTable formula = joint_pmf_null(m, n, spec.s, spec.r);

  all_match = true;
  Table table;
  table.columns = {"k", "i", "oracle_count", "formula_count", "match"};
  for (int k = 0; k <= n; ++k) {
    for (int i = 0; i <= m; ++i) {
      const bool same = enumerated.count(k, i) == formula.count(k, i);
      all_match = all_match && same;
      if (enumerated.count(k, i) == 0 && formula.count(k, i) == 0) continue;
      table.rows.push_back({std::to_string(k), std::to_string(i), enumerated.count(k, i).get_str(),
                            formula.count(k, i).get_str(), same ? "true" : "false"});
    }
  }
  table.metadata = {{"m", std::to_string(m)},
                    {"n", std::to_string(n)},
                    {"s", std::to_string(spec.s)},
                    {"r", std::to_string(spec.r)},
                    {"total", enumerated.total().get_str()},
                    {"all_match", all_match ? "true" : "false"}};
  return table;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Exact and approximate two-sample exceedance/precedence tests"};
  app.require_subcommand(1);

  const auto common = [&config](CLI::App* sub) {
    sub->add_option("--format", config.format, "Output format: csv or json");
    sub->add_option("--precision", config.precision, "Base decimal digits for alternating sums (>= 30)");
    sub->add_option("--alpha", config.alpha_text, "Nominal level")->capture_default_str();
  };
  const auto sizes = [&config](CLI::App* sub) {
    sub->add_option("--m", config.m_text, "X sample size (list or range a:b[:step])");
    sub->add_option("--n", config.n_text, "Y sample size (list or range)");
  };
  const auto thresholds_flags = [&config](CLI::App* sub) {
    sub->add_option("--rho", config.rho_text, "Threshold proportion(s)");
    sub->add_option("--s", config.s_text, "X threshold index");
    sub->add_option("--r", config.r_text, "Y threshold index (list or range)");
  };
  const auto random_flags = [&config](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "Master seed (default 20130917)");
    sub->add_option("--reps", config.reps, "Monte Carlo replicates");
  };

  auto* test = app.add_subcommand("test", "Test one data set");
  common(test);
  thresholds_flags(test);
  test->add_option("--x", config.x_path, "One-column CSV with the X sample");
  test->add_option("--y", config.y_path, "One-column CSV with the Y sample");
  test->add_option("--input", config.input_path, "JSON file {\"x\": [...], \"y\": [...]}");
  test->add_option("--method", config.method, "exact or approx");
  test->add_option("--ties", config.ties, "error or conservative");
  test->callback([&config] { config.command = "test"; });

  auto* tables = app.add_subcommand("tables", "Regenerate tables");
  tables->require_subcommand(1);
  auto* critical = tables->add_subcommand("critical", "Critical values");
  auto* power = tables->add_subcommand("power", "Power under Lehmann alternatives");
  auto* approx = tables->add_subcommand("approx", "Chi-square approximation at the exact critical values");
  for (auto* sub : {critical, power, approx}) {
    common(sub);
    sizes(sub);
    thresholds_flags(sub);
  }
  power->add_option("--eta", config.eta_text, "Lehmann parameter(s)");
  power->add_option("--method", config.method, "auto, exact or mc");
  random_flags(power);
  approx->add_option("--df", config.df, "matched or text");
  critical->callback([&config] { config.command = "tables critical"; });
  power->callback([&config] { config.command = "tables power"; });
  approx->callback([&config] { config.command = "tables approx"; });

  auto* simulate = app.add_subcommand("simulate", "Seeded simulations");
  simulate->require_subcommand(1);
  auto* sim_power = simulate->add_subcommand("power", "Monte Carlo power grid");
  auto* contamination = simulate->add_subcommand("contamination", "Contaminated-normal rejection rates");
  auto* figure = simulate->add_subcommand("figure-data", "Exact, negative binomial and chi-square columns");
  for (auto* sub : {sim_power, contamination, figure}) {
    common(sub);
    sizes(sub);
    thresholds_flags(sub);
    random_flags(sub);
  }
  sim_power->add_option("--eta", config.eta_text, "Lehmann parameter(s)");
  contamination->add_option("--epsilon", config.epsilon, "Mixing proportion")->capture_default_str();
  figure->add_option("--df", config.df, "matched or text");
  sim_power->callback([&config] { config.command = "simulate power"; });
  contamination->callback([&config] { config.command = "simulate contamination"; });
  figure->callback([&config] { config.command = "simulate figure-data"; });

  auto* oracle = app.add_subcommand("oracle", "Compare enumeration with the closed-form null counts");
  common(oracle);
  sizes(oracle);
  thresholds_flags(oracle);
  oracle->callback([&config] { config.command = "oracle"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    config.finalize();
    Table table;
    int code = kExitOk;
    if (config.command == "test") {
      table = cmd_test(config);
    } else if (config.command == "tables critical") {
      table = cmd_tables_critical(config);
    } else if (config.command == "tables power") {
      table = cmd_tables_power(config);
    } else if (config.command == "tables approx") {
      table = cmd_tables_approx(config);
    } else if (config.command == "simulate power") {
      table = cmd_simulate_power(config);
    } else if (config.command == "simulate contamination") {
      table = cmd_simulate_contamination(config);
    } else if (config.command == "simulate figure-data") {
      table = cmd_simulate_figure_data(config);
    } else {
      bool all_match = true;
      table = cmd_oracle(config, all_match);
      if (!all_match) code = kExitFailure;
    }
    if (config.format == "json") {
      table.write_json(out);
    } else {
      table.write_csv(out);
    }
    return code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const TieError& e) {
    err << "tie error: " << e.what() << '\n';
    return kExitTie;
  } catch (const SizeBoundError& e) {
    err << "size bound: " << e.what() << '\n';
    return kExitSizeBound;
  } catch (const PrecisionError& e) {
    err << "precision error: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace sidak::cli
