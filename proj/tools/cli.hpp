#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace skiptrack::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line, `args` excluding the program name. Messages go to
/// `log`. Returns 0 only when every requested output was written.
int run(const std::vector<std::string>& args, std::ostream& log);

/// Name of the resolved-config snapshot written into every output directory.
inline constexpr const char* kSnapshotName = "resolved_config.json";

}  // namespace skiptrack::cli
