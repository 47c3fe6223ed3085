#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ametric/cli/config.hpp"
#include "ametric/cli/report.hpp"

namespace ametric::cli {

enum class Command { kAxioms, kClassify, kSolve, kVerify };

/// Throws UsageError for unknown names.
Command command_from_string(const std::string& name);
std::string to_string(Command command);

/// 0: every check passed; 1: mathematical violation or non-convergence; 2: usage/config error.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitUsage = 2 };

struct CommandResult {
  int exit_code = kExitOk;
  ordered_json report;
  /// Files written, in the order they were written.
  std::vector<std::filesystem::path> outputs;
};

/// Run one command and write its artifacts under out_dir. The JSON report embeds the
/// fully materialized config and never depends on out_dir or wall-clock state.
CommandResult run_command(Command command, const ExperimentConfig& config,
                          const std::filesystem::path& out_dir);

/// Read the config at config_path and run the command. Config problems are printed
/// to stderr as "<path>:<line>: error: <message>" and yield kExitUsage.
CommandResult run_from_file(Command command, const std::filesystem::path& config_path,
                            const std::filesystem::path& out_dir,
                            std::optional<std::uint64_t> seed_override = std::nullopt);

/// Route the default logger to stderr; level from AMETRIC_FIX_LOG (quiet|info|debug).
void configure_logging();

}  // namespace ametric::cli
