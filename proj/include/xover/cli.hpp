// Entry point of the `xover` command-line tool.
#pragma once

#include <ostream>

namespace xover::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses `argv` and runs one subcommand. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xover::cli
