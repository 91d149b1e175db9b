#pragma once

// Experiment runner behind the `shotnoise` binary. Each subcommand reads a
// JSON config, validates it completely, then runs and writes config.json,
// report.json and its CSVs into the output directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace shotnoise {

inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceFailed = 1;
inline constexpr int kExitInvalidConfig = 2;

struct CliRequest {
  std::string command;                  // wave, verify-master, stationary, transient, tanh, verify-specfun
  std::optional<std::filesystem::path> config;  // defaults apply when absent
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;    // overrides the config's seed
  std::optional<int> workers;           // overrides the config's workers
};

const std::vector<std::string>& cli_commands();

/// Runs one subcommand and returns the exit code: 0 when every tolerance
/// flag holds, 1 when one fails (or the run aborts), 2 when the
/// configuration is invalid, in which case nothing is written.
int run_cli(const CliRequest& request, std::ostream& log);

/// Argument parsing front end for main().
int cli_main(int argc, char** argv);

}  // namespace shotnoise
