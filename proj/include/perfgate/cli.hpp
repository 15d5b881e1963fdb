#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perfgate {

enum ExitCode : int {
    kExitOk = 0,          // success, or SKIP recommended
    kExitUsage = 2,
    kExitDataError = 3,
    kExitRunTests = 10,   // RUN recommended
};

/// Runs one CLI invocation. `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perfgate
