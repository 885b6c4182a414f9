#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phishlab {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 2,           // IO, schema or usage errors
  kExitNotPhishing = 3,  // attack seed below the threshold
  kExitExhausted = 4,    // attack gave up, or fixtures out of reach
};

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phishlab
