#include "sidak/cli/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sidak/errors.hpp"

namespace sidak::cli {
namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

bool parse_double(std::string_view text, double& out) {
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string quote_if_needed(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t j = 0; j < line.size(); ++j) {
    const char ch = line[j];
    if (quoted) {
      if (ch == '"' && j + 1 < line.size() && line[j + 1] == '"') {
        current.push_back('"');
        ++j;
      } else if (ch == '"') {
        quoted = false;
      } else {
        current.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

std::vector<double> read_column_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::vector<double> values;
  std::string line;
  int line_number = 0;
  bool first_record = true;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string cleaned = trim(line);
    if (cleaned.empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_record(cleaned);
    } catch (const ParseError& e) {
      throw ParseError("'" + path.string() + "' line " + std::to_string(line_number) + ": " + e.what());
    }
    const std::string field = trim(fields.front());
    double value = 0.0;
    if (!parse_double(field, value)) {
      if (first_record) {
        first_record = false;
        continue;  // header
      }
      throw ParseError("'" + path.string() + "' line " + std::to_string(line_number) + ": not a number: '" +
                       field + "'");
    }
    if (!std::isfinite(value)) {
      throw ParseError("'" + path.string() + "' line " + std::to_string(line_number) + ": non-finite value");
    }
    first_record = false;
    values.push_back(value);
  }
  if (values.empty()) throw ParseError("'" + path.string() + "' holds no observations");
  return values;
}

SamplePair read_sample_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  const auto column = [&](const char* key) {
    if (!doc.is_object() || !doc.contains(key) || !doc[key].is_array()) {
      throw ParseError("'" + path.string() + "': expected an array under \"" + key + "\"");
    }
    std::vector<double> values;
    for (const auto& item : doc[key]) {
      if (!item.is_number()) throw ParseError("'" + path.string() + "': non-numeric entry in \"" + key + "\"");
      values.push_back(item.get<double>());
    }
    if (values.empty()) throw ParseError("'" + path.string() + "': \"" + key + "\" is empty");
    return values;
  };
  return SamplePair(column("x"), column("y"));
}

void write_column_csv(const std::filesystem::path& path, std::string_view header, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  CsvWriter writer(out);
  writer.row({std::string(header)});
  for (double v : values) writer.row({format_exact(v)});
}

void write_sample_json(const std::filesystem::path& path, const SamplePair& sample) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  nlohmann::json doc = {{"x", sample.x()}, {"y", sample.y()}};
  out << doc.dump() << '\n';
}

std::string format_exact(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::string format_fixed(double value, int decimals) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed, decimals);
  return std::string(buffer, ptr);
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t j = 0; j < fields.size(); ++j) {
    if (j > 0) out_ << ',';
    out_ << quote_if_needed(fields[j]);
  }
  out_ << '\n';
}

}  // namespace sidak::cli
