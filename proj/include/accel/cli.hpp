#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace accel::cli {

enum ExitCode : int { ok = 0, usage = 1, divergence = 2, audit_failure = 3 };

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace accel::cli
