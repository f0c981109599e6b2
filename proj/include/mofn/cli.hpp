#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mofn {

/// Exit status contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitDomain = 1, kExitUsage = 2 };

/// Runs the `mofn` command line. `args` excludes the program name. Results go
/// to `out` (unless --out is given), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mofn
