#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace itermean::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2, kOpenProblem = 3 };

/// Runs one command line (without the program name) and returns its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace itermean::cli
