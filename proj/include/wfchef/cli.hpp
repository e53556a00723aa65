#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wfchef::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid_input = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_internal = 3;

// Runs one command line (args excludes the program name). Failures are
// reported on `err` as a single `error: <category>: <message>` line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wfchef::cli
