#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mvpde {

enum ExitStatus : int {
  kExitSuccess = 0,
  kExitCheckFailed = 1,
  kExitUnexpectedOutcome = 2,  // blow-up where none was expected, or vice versa
  kExitConfigError = 3,
  kExitRuntimeError = 4,
};

/// `args[0]` is the program name. Subcommands: solve, check, sweep,
/// predict, verify. Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mvpde
