#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gronwall/error.hpp"

namespace gronwall {

/// Exit status for a library error: 2 schema, 3 hypothesis, 4 numerical.
int exit_code(ErrorKind kind);

/// Runs the command line (args excludes the program name). Reports go to out,
/// error objects to err. Returns the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gronwall
