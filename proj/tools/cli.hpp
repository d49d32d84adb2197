#pragma once

#include <ostream>

namespace swingnam::cli {

// Runs one subcommand and returns the process exit code:
// 0 success, 1 I/O, 2 validation, 3 numeric failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swingnam::cli
