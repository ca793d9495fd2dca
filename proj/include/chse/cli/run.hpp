#pragma once

#include <ostream>

#include "chse/cli/config.hpp"

namespace chse::cli {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kLedgerViolation = 3, kResourceLimit = 4 };

// Exit code for an error category.
int exit_code_for(const std::string& category);

// Runs one resolved, validated configuration: writes the CSV files and
// manifest.json into cfg.str("out"). `out` receives the word for `word` and
// a one-line JSON summary otherwise.
int run(const RunConfig& cfg, std::ostream& out);

// Full command line: parsing, config file, validation, run. Errors are
// reported on `err` as one JSON line {"error": category, "message": ...}.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chse::cli
