#ifndef TRAILMINE_TOOLS_CLI_HPP
#define TRAILMINE_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace trailmine::cli {

//! Process exit codes of the command-line tool.
enum ExitCode : int {
    EXIT_OK = 0,
    EXIT_BAD_ARGUMENTS = 2,
    EXIT_IO = 3,
    EXIT_INTERNAL = 4,
};

/**
 * Runs one command line (without the program name) and returns the exit
 * code. Results go to `out`, diagnostics to `err`; nothing else is touched,
 * so the function can be driven from tests.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace trailmine::cli

#endif // TRAILMINE_TOOLS_CLI_HPP
