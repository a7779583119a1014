#pragma once

// The `parafree` command line.

#include <iosfwd>
#include <string>
#include <vector>

namespace parafree {

/// Runs one command; `args` excludes the program name. Reports go to `out`,
/// JSON diagnostics to `err`. Returns 0 for any computed result, 1 for bad
/// input and 2 when an internal invariant breaks.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace parafree
