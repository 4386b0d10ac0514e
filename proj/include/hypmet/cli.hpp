#pragma once

#include <iosfwd>

namespace hypmet {

/// Command-line entry point. Writes the JSON report (or a JSON error
/// object) to `out`; returns the process exit code:
/// 0 success, 1 malformed input, 2 infeasible target, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hypmet
