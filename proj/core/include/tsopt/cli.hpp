#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line surface. The dispatcher is a library function so tests can
// run commands in-process and compare output byte for byte; the installed
// binary is a thin wrapper around it.

namespace tsopt {

// Runs one command with the given arguments (excluding the program name).
// Exit codes: 0 success, 1 usage error, 2 diagnostics or processing error,
// 3 null circuit.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsopt
