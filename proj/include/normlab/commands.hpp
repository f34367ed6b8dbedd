#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace normlab {

/// Stable process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitEvalError = 3,
  kExitHypothesisFlagged = 4,
};

enum class OutputFormat { Json, Csv, Both };

struct CommandOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  OutputFormat format = OutputFormat::Both;
};

struct CommandOutput {
  int exit_code = kExitOk;
  /// (file name, contents) in a fixed order; written by the caller.
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
};

/// The subcommands: sharp, marty-scan, rescale, thm2, counterexample, check-config.
const std::vector<std::string>& command_names();

/// Validates `config` for `command` and runs it. Never throws for config or
/// evaluation problems; those are reported through exit_code and summary.
CommandOutput run_command(const std::string& command, const nlohmann::json& config,
                          const CommandOptions& options = {});

}  // namespace normlab
