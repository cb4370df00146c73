#pragma once

// The subcommands of the conesemi tool, callable in-process. Each returns the
// exit code (0 pass, 1 fail, 2 error), the JSON run report and its text form.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "conesemi/problem.hpp"

namespace conesemi {

inline constexpr std::uint64_t kDefaultSeed = 20200610;
inline constexpr std::size_t kDefaultSamples = 200;

struct CommandOptions {
  std::optional<std::filesystem::path> file;
  /// Used instead of reading `file` when set.
  std::optional<ProblemFile> problem;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  /// Raw value of CONESEMI_SEED, if set.
  std::optional<std::string> env_seed;
  /// dirichlet-demo only.
  std::vector<std::size_t> n_values;
  std::optional<std::vector<double>> t_grid;
};

struct CommandResult {
  int exit_code = 2;
  nlohmann::json report;
  std::string text;
};

CommandResult cmd_check_pod(const CommandOptions& opts);
CommandResult cmd_check_dissipative(const CommandOptions& opts);
CommandResult cmd_simulate(const CommandOptions& opts);
CommandResult cmd_represent(const CommandOptions& opts);
CommandResult cmd_dirichlet_demo(const CommandOptions& opts);

/// Dispatch by subcommand name; an unknown name gives exit 2.
CommandResult run_command(const std::string& name, const CommandOptions& opts);

/// --seed, then the file's seed, then CONESEMI_SEED, then kDefaultSeed.
/// Throws InvalidArgument for a malformed CONESEMI_SEED.
std::uint64_t resolve_seed(const CommandOptions& opts, const ProblemFile* problem);

}  // namespace conesemi
