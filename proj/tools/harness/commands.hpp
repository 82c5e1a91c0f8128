#pragma once

#include <ostream>

namespace fxlt::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitBuild = 3,
};

/// Entry point of the `fxlt` command line; returns the process exit status.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fxlt::harness
