#ifndef RLRP_CLI_HPP
#define RLRP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace rlrp {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitNumerical = 3 };

/// Entry point of the `rlrp` tool: subcommands synth, corrupt, decompose,
/// benchmark, diag. Diagnostics go to `err`, tables without an output file to `out`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rlrp

#endif  // RLRP_CLI_HPP
