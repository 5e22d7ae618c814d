#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace netgame {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Runs one `netgame` invocation. `args` excludes the program name. Results
/// go to `out` (or the --out file), diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netgame
