#pragma once

#include <string>
#include <vector>

namespace fbmg::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kNumerical = 3,
  kInputFormat = 4,
  kDegenerate = 5,
};

/// Runs the command line `args` (args[0] is the program name) and returns the
/// process exit code. Summaries go to stdout, warnings and errors to stderr.
int run(const std::vector<std::string>& args);

}  // namespace fbmg::cli
