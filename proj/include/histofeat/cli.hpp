#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace histofeat {

/// Entry point of the `histofeat` tool. `args` excludes the program name.
/// Returns the process exit code; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace histofeat
