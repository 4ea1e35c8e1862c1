#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwploc::cli {

/// Parses `args` (without the program name) and runs one subcommand.
/// Returns the process exit code: 0 success, 1 partial, 2 usage or
/// configuration error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace mwploc::cli
