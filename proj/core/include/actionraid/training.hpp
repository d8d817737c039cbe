#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "actionraid/agents.hpp"
#include "actionraid/envs.hpp"

namespace actionraid {

enum class TrainAlgo { CrossEntropy, PolicyGradient };

std::string_view to_string(TrainAlgo algo);
TrainAlgo parse_train_algo(std::string_view text);

struct TrainConfig {
  TrainAlgo algo = TrainAlgo::CrossEntropy;
  int iterations = 200;
  std::uint64_t seed = 1;
  int jobs = 1;

  // Held-out evaluation that decides success.
  double reward_threshold = 0.0;
  int holdout_episodes = 30;
  std::uint64_t holdout_seed_base = 1'000'000'000;

  // Cross-entropy method.
  int population = 64;
  double elite_fraction = 0.125;
  int episodes_per_candidate = 3;
  double initial_param_std = 0.5;
  /// Additive exploration noise std, decaying linearly from start to end.
  double extra_noise_start = 0.2;
  double extra_noise_end = 0.0;

  /// Exploration std of the Gaussian policy, per action dimension.
  double initial_log_std = -1.0;
  /// When set, CEM also searches log_std, evaluating candidates on sampled
  /// actions and adding entropy_bonus * sum(log_std) to their fitness.
  bool learn_log_std = true;
  double entropy_bonus = 0.2;
  double min_log_std = -3.0;
  double max_log_std = 0.0;

  // Vanilla policy gradient.
  int pg_episodes_per_iteration = 16;
  double pg_learning_rate = 0.01;
  double discount = 0.99;

  // Critic fit for the quadratic Q agent (after mu is trained): at every state
  // of critic_episodes nominal episodes, critic_probes perturbed actions are
  // scored by following mu for up to critic_rollout_steps steps.
  int critic_episodes = 24;
  int critic_probes = 4;
  int critic_rollout_steps = 100;
  int critic_steps = 1500;
  int critic_batch = 128;
  double critic_learning_rate = 3e-3;
  double critic_action_noise = 0.3;
};

struct TrainingLogEntry {
  int iteration = 0;
  double mean_reward = 0.0;
  double std_reward = 0.0;
};

struct TrainingLog {
  std::vector<TrainingLogEntry> entries;
  double holdout_mean = 0.0;
  double holdout_std = 0.0;

  /// CSV with header `iteration,mean_reward,std_reward`.
  void write_csv(std::ostream& out) const;
};

class TrainingFailedError : public Error {
 public:
  TrainingFailedError(const std::string& what, TrainingLog log)
      : Error(what), log_(std::move(log)) {}
  std::string_view error_class() const noexcept override { return "training-failed"; }
  const TrainingLog& log() const { return log_; }

 private:
  TrainingLog log_;
};

struct TrainResult {
  std::unique_ptr<Agent> agent;
  TrainingLog log;
};

/// Trains a copy of `initial` on clones of `env`. Zero iterations returns the
/// agent unchanged without evaluation. Otherwise the trained agent's mean
/// nominal return over the held-out seeds must exceed reward_threshold, or
/// TrainingFailedError (carrying the log) is thrown.
TrainResult train(const Agent& initial, const Environment& env, const TrainConfig& config);

/// Undiscounted return of one episode. Mean mode uses nominal actions and
/// ignores `rng`.
double episode_return(Environment& env, const Agent& agent, std::uint64_t seed, ActMode mode,
                      Rng& rng);

/// Mean-mode returns for seeds base, base+1, ..., base+n-1.
std::vector<double> evaluate_nominal(const Environment& env, const Agent& agent,
                                     std::uint64_t seed_base, int n, int jobs = 1);

}  // namespace actionraid
