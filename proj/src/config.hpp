#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cm {

// Experiment description shared by every subcommand. Parsed from an
// INI-style text with sections [lattice], [model], [run], [output].
// Keys in [lattice], [model] and [output] are drawn from a fixed set;
// anything else is rejected at parse time. Keys in [run] are free-form
// strings here and validated per subcommand by the CLI layer.
struct ExperimentConfig {
  std::optional<int> ell;
  std::optional<int> big_l;
  std::vector<int> ell_list;

  double j = 1.0;
  double lambda = 0.0;
  std::map<int, double> v_shells;  // squared radius -> coupling

  std::map<std::string, std::string> run;

  std::string format;  // "json", "csv" or empty (subcommand default)
  std::string path;    // output file, empty means stdout
};

// Parses "r2:v,r2:v" pairs, e.g. "2:1.0,4:0.5". Duplicate radii,
// non-integer radii and non-finite couplings are rejected.
std::map<int, double> parse_v_shells(const std::string& text);

// Parses a comma-separated integer list, e.g. "8,10,12".
std::vector<int> parse_int_list(const std::string& text);

// Parses a comma-separated double list, e.g. "0.2,0.44,0.7".
std::vector<double> parse_double_list(const std::string& text);

// Strict scalar parsers: whole string must convert, no trailing junk.
int parse_int(const std::string& text);
double parse_double(const std::string& text);

// Parses the INI text. Throws std::invalid_argument with a line-numbered
// message on malformed syntax, unknown sections or unknown fixed keys.
ExperimentConfig parse_config_text(const std::string& text);

// Reads and parses a config file. Missing or unreadable file throws
// std::invalid_argument (validation failure, not a numeric one).
ExperimentConfig load_config_file(const std::string& path);

}  // namespace cm
