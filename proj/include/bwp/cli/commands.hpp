#pragma once

namespace bwp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitConfig = 2,
  kExitNonConvergence = 3,
};

// Parses the command line, dispatches one subcommand and maps every error
// to its exit code. Reports go to --out or stdout, diagnostics to stderr.
int run(int argc, const char* const* argv);

}  // namespace bwp::cli
