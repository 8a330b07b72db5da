#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dnstrip::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kConvergenceError = 3,
  kInconclusive = 4,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dnstrip::cli
