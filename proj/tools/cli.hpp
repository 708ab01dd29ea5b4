#pragma once

#include <string>
#include <vector>

namespace svcmisc::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kNumeric = 4,
  kExcluded = 5,
  kNoConvergence = 6,
};

// Entry point for `svcmisc scenario|simulate|fit|eval`. Returns an ExitCode.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace svcmisc::cli
