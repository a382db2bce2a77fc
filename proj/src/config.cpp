#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cm {
namespace {

std::string trim(const std::string& s) {
  size_t lo = 0;
  size_t hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

}  // namespace

int parse_int(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) fail("empty integer field");
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(t, &pos);
  } catch (const std::exception&) {
    fail("not an integer: '" + t + "'");
  }
  if (pos != t.size()) fail("trailing characters in integer: '" + t + "'");
  if (v < -1000000000L || v > 1000000000L) fail("integer out of range: '" + t + "'");
  return static_cast<int>(v);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) fail("empty numeric field");
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    fail("not a number: '" + t + "'");
  }
  if (pos != t.size()) fail("trailing characters in number: '" + t + "'");
  if (!std::isfinite(v)) fail("non-finite number: '" + t + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_int(part));
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

std::map<int, double> parse_v_shells(const std::string& text) {
  std::map<int, double> shells;
  const std::string t = trim(text);
  if (t.empty()) return shells;
  for (const std::string& part : split(t, ',')) {
    const std::vector<std::string> kv = split(part, ':');
    if (kv.size() != 2) fail("shell entry must be r2:v, got '" + part + "'");
    const int r2 = parse_int(kv[0]);
    const double v = parse_double(kv[1]);
    if (r2 <= 0) fail("shell radius^2 must be positive");
    if (!shells.emplace(r2, v).second) fail("duplicate shell radius^2");
  }
  return shells;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;

  const std::set<std::string> sections = {"lattice", "model", "run", "output"};
  std::set<std::string> seen;  // "section.key" of fixed keys already set

  auto fail_at = [&](const std::string& what) {
    fail("line " + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;

    if (t.front() == '[') {
      if (t.back() != ']') fail_at("unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!sections.count(section)) fail_at("unknown section '" + section + "'");
      continue;
    }

    const size_t eq = t.find('=');
    if (eq == std::string::npos) fail_at("expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) fail_at("empty key");
    if (section.empty()) fail_at("key outside any section");

    try {
      if (section != "run" && !seen.insert(section + "." + key).second)
        fail("duplicate key '" + key + "' in [" + section + "]");
      if (section == "lattice") {
        if (key == "ell") {
          cfg.ell = parse_int(val);
        } else if (key == "L") {
          cfg.big_l = parse_int(val);
        } else if (key == "ell_list") {
          cfg.ell_list = parse_int_list(val);
        } else {
          fail("unknown key '" + key + "' in [lattice]");
        }
      } else if (section == "model") {
        if (key == "J") {
          cfg.j = parse_double(val);
        } else if (key == "lambda") {
          cfg.lambda = parse_double(val);
        } else if (key == "v_shells") {
          cfg.v_shells = parse_v_shells(val);
        } else {
          fail("unknown key '" + key + "' in [model]");
        }
      } else if (section == "run") {
        if (!cfg.run.emplace(key, val).second) fail("duplicate run key '" + key + "'");
      } else {  // output
        if (key == "format") {
          if (val != "json" && val != "csv") fail("format must be json or csv");
          cfg.format = val;
        } else if (key == "path") {
          cfg.path = val;
        } else {
          fail("unknown key '" + key + "' in [output]");
        }
      }
    } catch (const std::invalid_argument& e) {
      // Re-tag nested parse errors with the line number.
      std::string msg = e.what();
      const std::string prefix = "config: ";
      if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
      fail_at(msg);
    }
  }

  if (cfg.lambda < 0.0) fail("lambda must be nonnegative");
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace cm
