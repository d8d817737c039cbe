#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "actionraid/harness.hpp"

namespace actionraid {

/// mean(attack) - mean(nominal) for one attacked cell.
struct AblationRow {
  std::string cell;
  AttackConfig attack;
  double mean = 0.0;
  double nominal_mean = 0.0;
  double difference = 0.0;
};

/// Reductions of a LAS cell and its paired MAS cell (b = B / H).
struct LasVsMasRow {
  std::string las_cell;
  std::string mas_cell;
  NormOrder p_spatial = NormOrder::L2;
  NormOrder q_temporal = NormOrder::L2;
  double B = 0.0;
  int H = 1;
  double las_reduction = 0.0;
  double mas_reduction = 0.0;
  double las_minus_mas = 0.0;
};

/// One row per attacked cell, in sweep order. Throws InvalidInputError when
/// the sweep has no nominal cell.
std::vector<AblationRow> ablation_table(const SweepResult& sweep);

/// One row per LAS cell whose paired MAS cell is present.
std::vector<LasVsMasRow> las_vs_mas_table(const SweepResult& sweep);

/// Per-episode attack mass per action dimension, plus their sum.
struct DimensionRow {
  std::size_t episode = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd per_dimension;
  double total = 0.0;
};

std::vector<DimensionRow> dimension_report(const std::vector<EpisodeSummary>& episodes);
std::vector<DimensionRow> dimension_report(const std::vector<EpisodeRecord>& records);

struct TraceRow {
  std::size_t episode = 0;
  std::size_t t = 0;
  double delta_norm = 0.0;
};

std::vector<TraceRow> delta_trace_report(const std::vector<EpisodeSummary>& episodes);
std::vector<TraceRow> delta_trace_report(const std::vector<EpisodeRecord>& records);

/// Median over episodes of the Gini coefficient of each episode's ||delta'||
/// trace.
double median_trace_gini(const std::vector<EpisodeSummary>& episodes);

/// Streams steps.csv rows as episodes finish:
///   episode_id,t,delta_0,...,delta_{m-1},delta_norm,reward
class StepsCsvWriter {
 public:
  StepsCsvWriter(const std::filesystem::path& path, std::size_t action_dim);
  void write(std::size_t episode_id, const EpisodeRecord& record);

 private:
  std::ofstream out_;
  std::size_t action_dim_;
};

/// Raw results of a run: manifest.json and episodes.csv. steps.csv is written
/// separately through StepsCsvWriter while episodes run.
void write_sweep_raw(const std::filesystem::path& dir, const SweepResult& sweep);

/// Derived tables from a sweep: summary.json, cell_stats.csv, ablation.csv,
/// las_vs_mas.csv, dims.csv, traces.csv and plots.gp.
void write_report(const std::filesystem::path& dir, const SweepResult& sweep);

/// Rebuilds a SweepResult from manifest.json, episodes.csv and steps.csv.
/// Throws InvalidInputError when the directory holds no results and
/// FormatError for malformed files.
SweepResult load_sweep_result(const std::filesystem::path& dir);

/// Global episode id used by episodes.csv and steps.csv.
inline std::size_t episode_id(std::size_t cell_index, std::size_t index, int n_episodes) {
  return cell_index * static_cast<std::size_t>(n_episodes) + index;
}

}  // namespace actionraid
