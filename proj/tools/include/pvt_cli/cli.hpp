#pragma once

#include <iosfwd>

namespace pvt::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kContractViolation = 2,
  kNoConvergence = 3,
};

/// Runs one command. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pvt::cli
