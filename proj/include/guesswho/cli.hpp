#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace guesswho::cli {

/// Exit codes scripts rely on.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `gw` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace guesswho::cli
