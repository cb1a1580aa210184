#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curvemates {

/// Exit codes of curve-mates.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitNotAFrenetMate = 4,
};

/// Runs `curve-mates <synthesize|mate|classify|verify> [flags]`; args exclude
/// the program name. Reports go to --out when given, otherwise to out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace curvemates
