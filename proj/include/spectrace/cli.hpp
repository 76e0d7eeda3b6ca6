#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spectrace::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one invocation. args excludes the program name. The report goes to
/// out (or to --output when given); diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* tool_version();

}  // namespace spectrace::cli
