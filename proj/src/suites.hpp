#pragma once

#include <string>
#include <vector>

namespace cm {

// One verdict line of a suite: a measured quantity against its bound.
struct CheckLine {
  bool ok = false;
  std::string text;
};

struct SuiteResult {
  std::string suite;
  bool passed = true;
  double seconds = 0.0;
  std::vector<CheckLine> checks;
};

// Names accepted by run_suite, in canonical execution order.
const std::vector<std::string>& suite_names();

// Runs one named verification suite end to end. Unknown names throw
// std::invalid_argument. Numerical failures inside a suite are caught
// and turned into failing check lines, so the caller always gets a
// result to print.
SuiteResult run_suite(const std::string& name);

// Interacting-universality suite restricted to a single coupling: crossing
// search, strip sweep and extrapolation at this lambda only.
SuiteResult run_theorem1_single(double lambda);

// Renders the canonical report block: one PASS/FAIL header line plus
// indented check lines.
std::string format_suite_result(const SuiteResult& r);

}  // namespace cm
