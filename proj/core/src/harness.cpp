#include "actionraid/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <optional>

#include "actionraid/parallel.hpp"
#include "actionraid/stats.hpp"
#include "csv_format.hpp"

namespace actionraid {

std::uint64_t state_digest(const StateVector& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    std::uint64_t bits = 0;
    const double v = s[i];
    std::memcpy(&bits, &v, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::uint64_t attack_stream_seed(std::uint64_t attack_seed, std::uint64_t episode_seed) {
  // splitmix64 finalizer over a combination of both seeds
  std::uint64_t z = attack_seed * 0x9e3779b97f4a7c15ULL + episode_seed + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EpisodeRecord run_episode(const Environment& env, const Agent& agent, const AttackConfig& cfg,
                          std::uint64_t seed) {
  if (agent.state_dim() != env.state_dim() || agent.action_dim() != env.action_dim()) {
    throw InvalidInputError("run_episode: agent and environment dimensions differ");
  }
  cfg.validate();

  auto live = env.clone();
  Rng rng(attack_stream_seed(cfg.seed, seed));
  EpisodeRecord rec;
  rec.seed = seed;
  rec.attack = cfg;
  rec.per_dimension_attack = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(env.action_dim()));

  StateVector s = live->reset(seed);
  std::optional<LasController> las;
  if (cfg.kind == AttackKind::Las) las.emplace(cfg, *live);

  while (!live->done()) {
    StepRecord step;
    step.state_digest = state_digest(s);
    StepResult result;
    if (las) {
      auto out = las->step(agent, *live, rng);
      step.nominal = std::move(out.nominal_action);
      step.delta = std::move(out.delta);
      result = std::move(out.result);
    } else {
      step.nominal = agent.nominal_action(s);
      switch (cfg.kind) {
        case AttackKind::Mas: step.delta = mas_attack_step(agent, s, cfg, rng); break;
        case AttackKind::Random: step.delta = random_attack_step(env.action_dim(), cfg, rng); break;
        default: step.delta = ActionVector::Zero(step.nominal.size()); break;
      }
      result = live->step(step.nominal + step.delta);
    }
    step.perturbed = step.nominal + step.delta;
    step.delta_norm = norm_lp(step.delta, cfg.p_spatial);
    step.reward = result.reward;
    rec.cumulative_reward += result.reward;
    rec.per_dimension_attack += step.delta.cwiseAbs();
    rec.steps.push_back(std::move(step));
    s = std::move(result.next_state);
  }
  return rec;
}

CellStats compute_stats(const std::vector<double>& values) {
  CellStats out;
  out.n = values.size();
  if (values.empty()) return out;
  out.mean = stats::mean(values);
  out.std = stats::sample_std(values);
  out.median = stats::median(values);
  out.q1 = stats::quantile(values, 0.25);
  out.q3 = stats::quantile(values, 0.75);
  out.min = *std::min_element(values.begin(), values.end());
  out.max = *std::max_element(values.begin(), values.end());
  return out;
}

std::vector<double> SweepCell::rewards() const {
  std::vector<double> out;
  out.reserve(episodes.size());
  for (const auto& e : episodes) out.push_back(e.cumulative_reward);
  return out;
}

double SweepCell::budget() const {
  switch (attack.kind) {
    case AttackKind::Las: return attack.B;
    case AttackKind::None: return 0.0;
    default: return attack.b;
  }
}

const SweepCell* SweepResult::find(const std::string& id) const {
  for (const auto& c : cells) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const SweepCell* SweepResult::nominal() const {
  for (const auto& c : cells) {
    if (c.attack.kind == AttackKind::None) return &c;
  }
  return nullptr;
}

std::string cell_id(const AttackConfig& cfg) {
  const std::string p(to_string(cfg.p_spatial));
  switch (cfg.kind) {
    case AttackKind::None: return "nominal";
    case AttackKind::Random: return "random_" + p + "_b" + detail::format_double(cfg.b);
    case AttackKind::Mas: return "mas_" + p + "_b" + detail::format_double(cfg.b);
    case AttackKind::Las:
      return "las_" + p + "_" + std::string(to_string(cfg.q_temporal)) + "_B" +
             detail::format_double(cfg.B) + "_H" + std::to_string(cfg.H);
  }
  return "unknown";
}

std::vector<AttackConfig> expand_grid(const SweepGrid& grid, const ActionBounds& bounds) {
  const double range = bounds.mean_range();
  std::vector<AttackConfig> out;
  AttackConfig nominal = grid.base;
  nominal.kind = AttackKind::None;
  nominal.b = 0.0;
  nominal.B = 0.0;
  nominal.H = 1;
  out.push_back(nominal);

  std::vector<AttackConfig> per_step;
  std::vector<AttackConfig> las;
  auto add_unique = [](std::vector<AttackConfig>& list, const AttackConfig& c) {
    for (const auto& existing : list) {
      if (cell_id(existing) == cell_id(c)) return;
    }
    list.push_back(c);
  };

  for (int h : grid.horizons) {
    for (double f : grid.budget_fractions) {
      const double window = f * range * h;
      for (NormOrder p : grid.spatial) {
        AttackConfig base = grid.base;
        base.p_spatial = p;
        base.H = 1;
        base.B = 0.0;
        base.b = window / h;
        if (grid.include_random) {
          AttackConfig c = base;
          c.kind = AttackKind::Random;
          add_unique(per_step, c);
        }
        if (grid.include_mas) {
          AttackConfig c = base;
          c.kind = AttackKind::Mas;
          add_unique(per_step, c);
        }
        if (grid.include_las) {
          for (NormOrder q : grid.temporal) {
            AttackConfig c = grid.base;
            c.kind = AttackKind::Las;
            c.p_spatial = p;
            c.q_temporal = q;
            c.B = window;
            c.H = h;
            c.b = 0.0;
            add_unique(las, c);
          }
        }
      }
    }
  }
  out.insert(out.end(), per_step.begin(), per_step.end());
  out.insert(out.end(), las.begin(), las.end());
  return out;
}

EpisodeSummary summarize(const EpisodeRecord& record) {
  EpisodeSummary s;
  s.seed = record.seed;
  s.cumulative_reward = record.cumulative_reward;
  s.length = record.length();
  s.per_dimension_attack = record.per_dimension_attack;
  s.delta_norms.reserve(record.steps.size());
  for (const auto& step : record.steps) s.delta_norms.push_back(step.delta_norm);
  return s;
}

SweepResult run_cells(const Environment& env, const Agent& agent, const std::string& agent_id,
                      const std::vector<AttackConfig>& cells, int n_episodes,
                      std::uint64_t base_seed, int jobs, const EpisodeSink& sink) {
  if (n_episodes < 1) throw InvalidInputError("run_cells: n_episodes must be >= 1");
  if (cells.empty()) throw InvalidInputError("run_cells: no cells");

  SweepResult result;
  result.env_name = std::string(env.name());
  result.agent_id = agent_id;
  result.action_dim = env.action_dim();
  result.n_episodes = n_episodes;
  result.base_seed = base_seed;
  for (const auto& cfg : cells) {
    cfg.validate();
    const std::string id = cell_id(cfg);
    if (result.find(id) != nullptr) throw InvalidInputError("run_cells: duplicate cell " + id);
    result.cells.push_back({id, cfg, {}});
    result.cells.back().episodes.resize(static_cast<std::size_t>(n_episodes));
  }

  const auto n = static_cast<std::size_t>(n_episodes);
  const std::size_t total = result.cells.size() * n;
  // Work proceeds in chunks so full step records only live while the sink
  // consumes them.
  const std::size_t chunk =
      std::max<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)) * 8);
  std::vector<EpisodeRecord> records;
  for (std::size_t start = 0; start < total; start += chunk) {
    const std::size_t count = std::min(chunk, total - start);
    records.assign(count, EpisodeRecord{});
    parallel_for(count, jobs, [&](std::size_t k) {
      const std::size_t task = start + k;
      const auto& cell = result.cells[task / n];
      records[k] = run_episode(env, agent, cell.attack, base_seed + task % n);
    });
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t task = start + k;
      auto& cell = result.cells[task / n];
      cell.episodes[task % n] = summarize(records[k]);
      if (sink) sink(task / n, task % n, records[k]);
    }
  }
  return result;
}

SweepResult run_sweep(const Environment& env, const Agent& agent, const std::string& agent_id,
                      const SweepGrid& grid, int n_episodes, std::uint64_t base_seed, int jobs,
                      const EpisodeSink& sink) {
  if (grid.horizons.empty() || grid.budget_fractions.empty() || grid.spatial.empty() ||
      (grid.include_las && grid.temporal.empty())) {
    throw InvalidInputError("run_sweep: empty grid");
  }
  for (double f : grid.budget_fractions) {
    if (!(f >= 0.0) || !std::isfinite(f)) throw InvalidInputError("run_sweep: bad budget fraction");
  }
  for (int h : grid.horizons) {
    if (h < 1) throw InvalidInputError("run_sweep: horizons must be >= 1");
  }
  return run_cells(env, agent, agent_id, expand_grid(grid, env.action_bounds()), n_episodes,
                   base_seed, jobs, sink);
}

}  // namespace actionraid
