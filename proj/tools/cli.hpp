#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sepbound::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_flags = 2,
    exit_convergence = 3,
    exit_data = 4,
    exit_verify = 5,
};

/// Runs the command line `args` (args[0] is the program name). Tables go to
/// `out` unless --output is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a:b:step" (inclusive) or "x,y,z". Throws DomainError when empty
/// or malformed.
std::vector<double> parse_grid(const std::string& text);

}  // namespace sepbound::cli
