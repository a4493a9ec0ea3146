#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zup::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kProcessingError = 1, kUsageError = 2 };

/// Runs the `zup` command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zup::cli
