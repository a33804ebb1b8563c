#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spmf::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,  // bad arguments or I/O failure
  kInvalidData = 3,
  kDiverged = 4,
};

/// Runs the tool with `args` (program name excluded), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spmf::cli
