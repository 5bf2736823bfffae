#ifndef MIXNORM_TOOLS_CLI_HPP
#define MIXNORM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace mixnorm::cli {

enum ExitCode { kOk = 0, kUsage = 2, kParse = 3, kNumerical = 4 };

/// Runs one command line (without the program name) and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace mixnorm::cli

#endif
