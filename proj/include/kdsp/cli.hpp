#pragma once

#include <iosfwd>

namespace kdsp {

enum ExitCode : int { kFound = 0, kInfeasible = 1, kBudget = 2, kInputError = 3 };

/// Runs one command line; results go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kdsp
