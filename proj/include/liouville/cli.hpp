#pragma once

// Command-line front end. run_cli takes the arguments after the program
// name and returns the process exit code:
//   0  all checks passed
//   1  at least one inequality/property violation
//   2  usage or configuration error
//   3  numerical failure (non-convergence)

#include <string>
#include <vector>

namespace liouville {

int run_cli(std::vector<std::string> args);

}  // namespace liouville
