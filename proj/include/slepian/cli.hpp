#ifndef SLEPIAN_CLI_HPP
#define SLEPIAN_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace slepian {

enum ExitCode : int {
  kExitOk = 0,
  kExitDomain = 2,
  kExitCapability = 3,
  kExitAccuracy = 4,
  kExitViolation = 5,
};

/// Runs one CLI invocation; args exclude the program name.
/// Commands: fpt, tables, arl, validate. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slepian

#endif  // SLEPIAN_CLI_HPP
