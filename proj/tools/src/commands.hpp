#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace actionraid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Runs the command line `args` (without the program name). Errors are
/// reported on `err` as a single line
///   actionraid: error-class=<class>: <message>
/// and mapped to exit codes: 2 for config, usage, invalid-input and format
/// errors, 3 for everything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace actionraid::cli
