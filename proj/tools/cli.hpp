#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sandnet::cli {

inline constexpr const char* kToolName = "sandnet";
inline constexpr const char* kToolVersion = "1.0.0";

/// Runs one invocation. `args` excludes the program name. Returns the process
/// exit code: 0 success, 1 validation failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sandnet::cli
