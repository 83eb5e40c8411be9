#pragma once

#include "itd/cli/config.hpp"

#include <ostream>

namespace itd::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2, internal_error = 3 };

/// Parses argv, runs the subcommand and maps failures to exit codes.
/// Diagnostics and progress go to `err`.
int run_cli(int argc, const char *const *argv, std::ostream &err);

/// Runs one subcommand on an already loaded configuration; throws on error.
void run_command(const RunConfig &config, std::ostream &log);

} // namespace itd::cli
