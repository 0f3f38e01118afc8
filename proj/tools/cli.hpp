#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nodal::cli {

enum ExitCode { kOk = 0, kValidation = 2, kDeskScale = 3 };

// Runs one command line (args exclude the program name). Results go to out
// unless --output is given; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nodal::cli
