#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

namespace fraclap::cli {

/// Exit codes of the fraclap binary.
enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,   ///< a verify report failed
  kUsage = 2,         ///< bad flags, malformed or invalid configuration, input outside the model
  kNumerical = 3,     ///< convergence, conditioning or internal failures
};

/// Runs the command line; `out` receives results sent to standard output
/// and `err` one JSON object per diagnostic.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes `text` to `path` through a temporary file in the same directory
/// and an atomic rename, so readers never see a partial file.
void write_atomically(const std::string& path, const std::string& text);

/// Executes one validated subcommand configuration and returns the JSON
/// result (used by run and by the tests).
nlohmann::ordered_json execute(const std::string& subcommand, const nlohmann::json& config);

/// CSV rendering of a result produced by execute.
std::string to_csv(const std::string& subcommand, const nlohmann::ordered_json& result);

}  // namespace fraclap::cli
