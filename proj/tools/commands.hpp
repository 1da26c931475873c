#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rot::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;

// Runs the tool on `args` (without the program name). JSON results go to
// `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rot::cli
