#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trigger::cli {

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kConfigError = 2,
    kDegenerate = 3,
    kValidationFailed = 4,
};

/*! Runs one command line (without the program name).

    Data goes to `out` (or the --output file), diagnostics to `err`.
*/
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace trigger::cli
