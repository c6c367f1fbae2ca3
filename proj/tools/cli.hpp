#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace locrad::cli {

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
/// Exit status: 0 success, 1 usage error, 2 configuration error, 3 any other
/// error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace locrad::cli
