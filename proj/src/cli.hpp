#pragma once

namespace cm {

// Front end shared by the shared-library entry point and the binary.
// Returns the process exit code: 0 success, 2 validation error (bad
// flags or config), 3 numerical failure or I/O error.
int cli_run(int argc, const char* const* argv);

}  // namespace cm
