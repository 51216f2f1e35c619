#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "kksampling/cli/config.hpp"

namespace kks::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;

struct CommandResult {
  int exit_code = kExitPass;
  nlohmann::json report;
};

/// Output files go to `out_dir` (created if needed).
CommandResult cmd_synthesize(const Config& config, const std::string& out_dir);
CommandResult cmd_verify(const Config& config, const std::string& out_dir);
CommandResult cmd_converge(const Config& config, const std::string& out_dir);
CommandResult cmd_reproduce(const Config& config, const std::string& out_dir);
CommandResult cmd_compare(const Config& config, const std::string& out_dir);

/// Dispatches by name; throws ConfigError for unknown subcommands.
CommandResult run_command(const std::string& name, const Config& config, const std::string& out_dir);

}  // namespace kks::cli
