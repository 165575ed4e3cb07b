#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sidak/exceedance.hpp"

namespace sidak::cli {

/// Reads one numeric column from a CSV file. A non-numeric first row is
/// taken as a header; blank lines are skipped. Throws ParseError naming the
/// file (and line) on malformed or empty input.
std::vector<double> read_column_csv(const std::filesystem::path& path);

/// Reads {"x": [...], "y": [...]}.
SamplePair read_sample_json(const std::filesystem::path& path);

void write_column_csv(const std::filesystem::path& path, std::string_view header, const std::vector<double>& values);
void write_sample_json(const std::filesystem::path& path, const SamplePair& sample);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

/// Fixed-point text with `decimals` digits after the dot, locale independent.
std::string format_fixed(double value, int decimals);

/// Splits one CSV record into fields, honouring RFC-4180 double quotes.
std::vector<std::string> split_csv_record(std::string_view line);

/// Streams RFC-4180 records.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void comment(std::string_view text);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace sidak::cli
