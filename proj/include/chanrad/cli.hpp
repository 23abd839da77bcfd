#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chanrad/config.hpp"
#include "chanrad/emit.hpp"

namespace chanrad::cli {

// Builds the table for a validated configuration.
Table compute(const RunConfig& cfg, std::ostream& diagnostics);

// Table rendered in the configured format.
std::string render(const RunConfig& cfg, std::ostream& diagnostics);

/// Full command-line entry point (args exclude the program name). Data goes
/// to `out` or the output file, messages to `err`. Returns the exit code:
/// 0 success, 2 invalid configuration, 3 I/O failure, 1 anything else.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chanrad::cli
