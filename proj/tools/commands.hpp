#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace radv::cli {

enum ExitCode : int {
  ok = 0,
  failure = 1,
  bad_input = 2,
  no_convergence = 3,
  bad_support = 4,
  verification_failed = 5,
  infeasible = 6,
  no_coverage = 7,
};

/// Runs one CLI invocation. args excludes the program name. Results go to
/// the --out file or, without one, to out; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace radv::cli
