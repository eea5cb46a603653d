#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynobs::cli {

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,
  kInputError = 2,
  kResourceError = 3,
};

/// Runs one command. `args` excludes the program name. The result document
/// (or DOT text for export-dot) goes to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynobs::cli
