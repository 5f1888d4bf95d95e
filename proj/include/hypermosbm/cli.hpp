#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypermosbm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Bad flag, unknown config key, out-of-range value or malformed partition.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs one command line (args excludes the program name). Never throws;
/// returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypermosbm::cli
