#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "actionraid/agents.hpp"
#include "actionraid/attacks.hpp"
#include "actionraid/envs.hpp"

namespace actionraid {

struct StepRecord {
  std::uint64_t state_digest = 0;  ///< FNV-1a of the observed state's bytes
  ActionVector nominal;
  ActionVector delta;  ///< applied perturbation, before environment clamping
  ActionVector perturbed;
  double delta_norm = 0.0;  ///< ||delta||_p with p = the attack's spatial norm
  double reward = 0.0;
};

struct EpisodeRecord {
  std::uint64_t seed = 0;
  AttackConfig attack;
  std::vector<StepRecord> steps;
  double cumulative_reward = 0.0;
  Eigen::VectorXd per_dimension_attack;  ///< sum over steps of |delta_i|

  std::size_t length() const { return steps.size(); }
};

/// FNV-1a over the IEEE-754 bytes of `s`.
std::uint64_t state_digest(const StateVector& s);

/// Seed of the attack RNG for one episode; a fixed mix of the attack seed and
/// the environment seed.
std::uint64_t attack_stream_seed(std::uint64_t attack_seed, std::uint64_t episode_seed);

/// Runs one full episode on a clone of `env` with nominal (mean) actions and
/// the configured attack.
EpisodeRecord run_episode(const Environment& env, const Agent& agent, const AttackConfig& cfg,
                          std::uint64_t seed);

/// Budgets are fractions of the environment's mean action range, expressed
/// per step: fraction f gives b = f * range and LAS window budget B = b * H.
/// Paired MAS and random cells use b = B / H.
struct SweepGrid {
  std::vector<double> budget_fractions{0.05, 0.10, 0.20};
  std::vector<int> horizons{5, 10};
  std::vector<NormOrder> spatial{NormOrder::L1, NormOrder::L2};
  std::vector<NormOrder> temporal{NormOrder::L1, NormOrder::L2};
  bool include_random = true;
  bool include_mas = true;
  bool include_las = true;
  /// PGD and seed settings shared by every attacked cell.
  AttackConfig base;
};

/// Per-episode data kept by a sweep: enough for every report.
struct EpisodeSummary {
  std::uint64_t seed = 0;
  double cumulative_reward = 0.0;
  std::size_t length = 0;
  Eigen::VectorXd per_dimension_attack;
  std::vector<double> delta_norms;
};

struct CellStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Mean, sample std, type-7 quartiles, min and max of the values.
CellStats compute_stats(const std::vector<double>& values);

struct SweepCell {
  std::string id;
  AttackConfig attack;
  std::vector<EpisodeSummary> episodes;

  std::vector<double> rewards() const;
  CellStats stats() const { return compute_stats(rewards()); }
  /// Per-step budget b for random/mas, window budget B for las, 0 for none.
  double budget() const;
};

struct SweepResult {
  std::string env_name;
  std::string agent_id;
  std::size_t action_dim = 0;
  int n_episodes = 0;
  std::uint64_t base_seed = 0;
  std::vector<SweepCell> cells;

  const SweepCell* find(const std::string& id) const;
  const SweepCell* nominal() const;
};

/// Stable identifier of an attack cell, e.g. "las_l2_l2_B2_H5".
std::string cell_id(const AttackConfig& cfg);

/// Cells in output order: nominal first, then random and mas per (p, b), then
/// las per (H, fraction, p, q). Duplicate per-step cells are merged.
std::vector<AttackConfig> expand_grid(const SweepGrid& grid, const ActionBounds& bounds);

/// Called once per finished episode in output order (cell, episode index),
/// regardless of `jobs`.
using EpisodeSink = std::function<void(std::size_t cell_index, std::size_t index,
                                       const EpisodeRecord& record)>;

/// Runs n_episodes of every listed cell. Episode i of every cell uses
/// environment seed base_seed + i, so cells are paired by seed. Results do not
/// depend on `jobs`. Throws InvalidInputError for no cells, duplicate cells or
/// n_episodes < 1.
SweepResult run_cells(const Environment& env, const Agent& agent, const std::string& agent_id,
                      const std::vector<AttackConfig>& cells, int n_episodes,
                      std::uint64_t base_seed, int jobs = 1, const EpisodeSink& sink = {});

/// run_cells over expand_grid(grid). Throws InvalidInputError for an empty
/// grid.
SweepResult run_sweep(const Environment& env, const Agent& agent, const std::string& agent_id,
                      const SweepGrid& grid, int n_episodes, std::uint64_t base_seed, int jobs = 1,
                      const EpisodeSink& sink = {});

EpisodeSummary summarize(const EpisodeRecord& record);

}  // namespace actionraid
