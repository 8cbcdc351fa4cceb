#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amicable::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kFinding = 2,      // a verification or identity failure on real input
    kIoError = 3,
};

// Parses args (without the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

} // namespace amicable::cli
