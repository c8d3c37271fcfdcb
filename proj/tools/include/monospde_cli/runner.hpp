#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace monospde::cli {

/// Exit codes of the monospde tool.
enum ExitCode : int { kPass = 0, kVerdictFail = 1, kUsageError = 2, kNumericalError = 3 };

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace monospde::cli
