#pragma once

#include <string>
#include <vector>

namespace cm {

// Formats a double with 17 significant digits, enough to round-trip
// any IEEE binary64 value exactly.
std::string format_double(double v);

// Minimal ordered JSON object builder. Keys are emitted in insertion
// order, so identical inputs produce byte-identical output. Values are
// escaped; nested structures go in via put_raw with pre-built JSON.
class JsonObject {
 public:
  JsonObject& put(const std::string& key, const std::string& v);
  JsonObject& put(const std::string& key, const char* v);
  JsonObject& put(const std::string& key, double v);
  JsonObject& put(const std::string& key, int v);
  JsonObject& put(const std::string& key, long long v);
  JsonObject& put(const std::string& key, bool v);
  JsonObject& put_raw(const std::string& key, const std::string& json);

  std::string str() const;  // single line, no trailing newline

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

// Fresh report object pre-seeded with schema_version "1".
JsonObject make_report();

std::string json_escape(const std::string& s);
std::string json_array(const std::vector<std::string>& raw_elements);
std::string json_array(const std::vector<double>& elements);
std::string json_array(const std::vector<int>& elements);

// CSV table with a fixed header. Rows must match the header width.
// Cells may not contain separators or newlines; reports only carry
// numbers and short identifiers.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  size_t rows() const { return rows_.size(); }
  std::string str() const;  // header line + rows, '\n' terminated

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes content to path, or to stdout when path is empty. File errors
// throw cm::numeric_error's sibling std::runtime_error so the CLI maps
// them to the numeric/runtime exit code, not the validation one.
void write_output(const std::string& path, const std::string& content);

}  // namespace cm
