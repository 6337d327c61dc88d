#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eur::cli {

/// Process exit codes.
enum ExitCode : int { kPass = 0, kViolation = 1, kParseError = 2, kComputationError = 3 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eur::cli
