#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace loopoid {

/// Runs one subcommand. argv[0] is the program name. Exit codes: 0 all
/// checks passed, 1 some check failed, 2 module or schema error (an error
/// JSON is written to `out`), and CLI11's code for usage errors.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace loopoid
