#pragma once

#include <string>
#include <vector>

namespace quasim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point of the `quasim` tool. Diagnostics go to stderr; the return
/// value is the process exit code.
int run_cli(int argc, const char* const* argv);
/// argv[0] is supplied.
int run_cli(const std::vector<std::string>& args);

}  // namespace quasim::cli
