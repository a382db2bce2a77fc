// Acceptance runner: executes one named diagnostic suite (or all of them
// when no name is given) through the library's public entry point, so the
// run covers exactly what a shared-library consumer sees.
//
//   acceptance [suite-name]
//
// Exit code 0 when every check passes, 1 on failure, 2 on a bad name.
#include <chargemeter.h>

#include <cstdio>

int main(int argc, char** argv) {
  if (argc > 2) {
    std::fprintf(stderr, "usage: %s [suite-name]\n", argv[0]);
    return 2;
  }
  const char* suite = argc == 2 ? argv[1] : "all";
  const char* args[] = {"chargemeter", "reproduce", "--suite", suite};
  int exit_code = -1;
  if (cm_cli_run(4, args, &exit_code) != CM_OK) {
    std::fprintf(stderr, "runner failed: %s\n", cm_last_error());
    return 2;
  }
  return exit_code == 0 ? 0 : (exit_code == 2 ? 2 : 1);
}
