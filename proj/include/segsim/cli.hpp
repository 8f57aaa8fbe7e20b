#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace segsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Entry point of the `segsim` tool; `args` excludes the program name.
/// Subcommands: genmap | run | sweep. Returns the process exit code:
/// 0 success, 1 usage or configuration error, 2 runtime error.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace segsim::cli
