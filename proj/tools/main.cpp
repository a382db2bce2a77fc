#include <stdio.h>

#include "chargemeter.h"

int main(int argc, char** argv) {
  int exit_code = 0;
  const int rc = cm_cli_run(argc, const_cast<const char* const*>(argv),
                            &exit_code);
  if (rc != CM_OK) {
    fprintf(stderr, "error: %s\n", cm_last_error());
    return rc;
  }
  return exit_code;
}
