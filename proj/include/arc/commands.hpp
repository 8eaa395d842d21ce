#pragma once

// Subcommands of the `arc` tool. run() parses argv-style arguments and maps
// failures onto stable exit codes.

#include <iosfwd>
#include <string>
#include <vector>

namespace arc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSweep = 3;
inline constexpr int kExitSkips = 4;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count from ARC_THREADS, falling back to 1.
std::size_t default_threads();

}  // namespace arc::cli
