#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rabi2q::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3 };

/// Runs one command line (args[0] is the program name). CSV goes to --out or
/// `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rabi2q::cli
