#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace resilog::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kRejected = 2,
  kIdentityFailed = 3,
};

// Runs the command line `args` (without the program name). Reports go to
// `out`, diagnostics in table mode to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resilog::cli
