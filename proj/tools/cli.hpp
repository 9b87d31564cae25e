#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idlp::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kDataError = 2;
inline constexpr int kNumericalError = 3;

// Runs `idlp <args...>` (args excludes the program name) and returns the exit
// code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idlp::cli
