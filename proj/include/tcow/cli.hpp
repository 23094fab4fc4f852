#pragma once

#include <iostream>

namespace tcow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `tcow` binary. Never throws; returns an exit code.
int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace tcow::cli
