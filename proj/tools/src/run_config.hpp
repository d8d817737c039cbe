#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "actionraid/agents.hpp"
#include "actionraid/attacks.hpp"
#include "actionraid/harness.hpp"
#include "actionraid/training.hpp"

namespace actionraid::cli {

inline constexpr int kRunConfigVersion = 1;

/// The embedded run config schema.
const nlohmann::json& run_config_schema();

struct AgentSpec {
  AgentKind kind = AgentKind::GaussianPolicy;
  /// Resolved against the config file's directory.
  std::optional<std::filesystem::path> weights;
};

struct RunConfig {
  std::string env;
  AgentSpec agent;
  bool has_agent = false;
  TrainConfig train;
  std::optional<AttackConfig> attack;
  SweepGrid sweep;
  int n_episodes = 30;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  std::optional<std::filesystem::path> out;
};

/// Validates against the schema, then fills a RunConfig. Attack fields left
/// out take AttackConfig::defaults_for the environment's action box. Throws
/// ConfigError with every schema violation listed.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Reads and parses a config file. A missing or unparsable file is a
/// ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace actionraid::cli
