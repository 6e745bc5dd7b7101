#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mldnn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one invocation. `args` excludes the program name. Usage problems
/// print the usage text to `err` and return 2; domain errors print a
/// message to `err` and return 1.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mldnn::cli
