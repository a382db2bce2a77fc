#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace cm {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

JsonObject& JsonObject::put(const std::string& key, const std::string& v) {
  fields_.emplace_back(key, "\"" + json_escape(v) + "\"");
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, const char* v) {
  return put(key, std::string(v));
}

JsonObject& JsonObject::put(const std::string& key, double v) {
  // NaN/inf have no JSON literal; null keeps the document parseable.
  fields_.emplace_back(key, std::isfinite(v) ? format_double(v) : "null");
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, int v) {
  fields_.emplace_back(key, std::to_string(v));
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, long long v) {
  fields_.emplace_back(key, std::to_string(v));
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, bool v) {
  fields_.emplace_back(key, v ? "true" : "false");
  return *this;
}

JsonObject& JsonObject::put_raw(const std::string& key, const std::string& json) {
  fields_.emplace_back(key, json);
  return *this;
}

std::string JsonObject::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : fields_) {
    if (!first) out += ",";
    first = false;
    out += "\"" + json_escape(key) + "\":" + value;
  }
  out += "}";
  return out;
}

JsonObject make_report() {
  JsonObject obj;
  obj.put("schema_version", "1");
  return obj;
}

std::string json_array(const std::vector<std::string>& raw_elements) {
  std::string out = "[";
  bool first = true;
  for (const std::string& e : raw_elements) {
    if (!first) out += ",";
    first = false;
    out += e;
  }
  out += "]";
  return out;
}

std::string json_array(const std::vector<double>& elements) {
  std::vector<std::string> raw;
  raw.reserve(elements.size());
  for (double v : elements)
    raw.push_back(std::isfinite(v) ? format_double(v) : "null");
  return json_array(raw);
}

std::string json_array(const std::vector<int>& elements) {
  std::vector<std::string> raw;
  raw.reserve(elements.size());
  for (int v : elements) raw.push_back(std::to_string(v));
  return json_array(raw);
}

namespace {

void check_cell(const std::string& cell) {
  for (char c : cell) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"')
      throw std::invalid_argument("csv cell contains separator: '" + cell + "'");
  }
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("csv header must be nonempty");
  for (const std::string& h : header_) check_cell(h);
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw std::invalid_argument("csv row width mismatch");
  for (const std::string& c : cells) check_cell(c);
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto append_line = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ",";
      out += cells[i];
    }
    out += "\n";
  };
  append_line(header_);
  for (const auto& row : rows_) append_line(row);
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace cm
