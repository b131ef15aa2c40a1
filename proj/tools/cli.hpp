#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace perfect::cli {

/// Exit codes.
inline constexpr int kSuccess = 0;
inline constexpr int kNegative = 1;
inline constexpr int kInputError = 2;
inline constexpr int kResourceLimit = 3;

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perfect::cli
