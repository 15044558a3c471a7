#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace rolegraph {

// Exit codes returned by run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs the command line with `args` excluding the program name. Results that
// have no output path go to `out`; diagnostics go to `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace rolegraph
