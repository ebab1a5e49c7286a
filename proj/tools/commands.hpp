#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace htdc::cli {

/// Exit codes of the htdc tool.
enum ExitCode : int {
  kSuccess = 0,
  kUserError = 1,
  kInternalError = 2,
};

/// Runs one htdc invocation. args excludes the program name, e.g.
/// {"train", "--data", "train.csv", "--out", "run1"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace htdc::cli
