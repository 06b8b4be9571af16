#pragma once

#include <iosfwd>

namespace clab {

enum ExitCode : int { exit_ok = 0, exit_validation = 2, exit_divergence = 3, exit_gate = 4 };

// The clab command line. Writes results to out and messages to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

} // namespace clab
