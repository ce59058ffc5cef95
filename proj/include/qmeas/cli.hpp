#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmeas {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitVerifyFailed = 2,
    kExitIo = 3,
};

/// Runs the command-line tool. `args` excludes the program name. CSV goes
/// to `--out` when given, otherwise to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qmeas
