#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace meanx::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kNoConvergence = 3,
};

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`; `in` feeds check-ergodic when no family is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace meanx::cli
