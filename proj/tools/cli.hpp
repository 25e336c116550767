#pragma once

// Command-line front end. Exit codes: 0 success, 1 checks failed,
// 2 usage or configuration error, 3 I/O error.

#include <ostream>
#include <string>
#include <vector>

namespace jumpforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Runs one invocation; `args` excludes the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace jumpforge::cli
