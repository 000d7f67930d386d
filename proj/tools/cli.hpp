#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dendro::cli {

enum ExitCode { kOk = 0, kValidation = 2, kFailure = 3 };

// Runs one subcommand; args excludes the program name. Errors are reported
// on err as a single JSON line and mapped to the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dendro::cli
