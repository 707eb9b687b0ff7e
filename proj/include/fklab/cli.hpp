#pragma once

#include <string>
#include <vector>

namespace fklab::cli {

/// Exit codes of the command line front end.
enum ExitCode : int { kOk = 0, kUnexpected = 1, kConfigError = 2, kNumericalFailure = 3 };

/// Runs one subcommand; argv[0] is the program name. Never throws.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

} // namespace fklab::cli
