#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gammaflow {

/// Runs the command line on `args` (program name excluded).  Reports go to
/// `out` unless --output names a file; diagnostics go to `err`.  Returns the
/// process exit code: 0 pass, 1 failure or invalid input, 2 inconclusive or
/// usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gammaflow
