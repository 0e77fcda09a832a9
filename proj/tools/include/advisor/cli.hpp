#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace advisor::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostics = 1;  // DSL, KB, criteria or bank errors
inline constexpr int kExitRuntime = 2;      // engine errors, malformed input, missing files
inline constexpr int kExitUsage = 64;

/// Runs one `advisor` invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace advisor::cli
