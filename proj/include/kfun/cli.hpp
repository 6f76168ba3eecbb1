#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kfun {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,          ///< malformed flags or a domain error
  kExitNotConverged = 2,
  kExitAssertedFailure = 3,
  kExitIo = 4,
};

/// Runs `kfun <args...>` (args excludes the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kfun
