#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fhlab/config.hpp"

namespace fhlab {

// process exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitBlowUp = 4;

// Each writes its artifacts into config.output_dir (created if needed) and
// returns an exit code. Solver and numerical errors propagate as exceptions;
// run_command maps them to exit codes.
int cmd_ground_state(const RunConfig& config, std::ostream& log);
int cmd_evolve(const RunConfig& config, std::ostream& log);
int cmd_stability(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);

struct CommandOverrides {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

/// Loads the config, applies overrides, dispatches and maps exceptions to
/// exit codes (ConfigError 2, NotConvergedError 3, BlowUpError 4, others 1).
int run_command(const std::string& subcommand, const std::filesystem::path& config_path,
                const CommandOverrides& overrides, std::ostream& log);

/// Sweep file: one job per line, "[subcommand] config_path"; the
/// subcommand defaults to stability, '#' starts a comment. Jobs run on
/// `overrides.jobs` workers, each writing to <out>/NNN_<config stem>.
/// Returns 0 iff every job returned 0, 2 for an unreadable sweep file, 1
/// otherwise.
int cmd_sweep(const std::filesystem::path& sweep_path, const CommandOverrides& overrides, std::ostream& log);

}  // namespace fhlab
