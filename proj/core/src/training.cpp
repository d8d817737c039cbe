#include "actionraid/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "actionraid/parallel.hpp"
#include "actionraid/stats.hpp"
#include "csv_format.hpp"

namespace actionraid {

std::string_view to_string(TrainAlgo algo) {
  return algo == TrainAlgo::CrossEntropy ? "cem" : "vpg";
}

TrainAlgo parse_train_algo(std::string_view text) {
  if (text == "cem" || text == "cross-entropy-method") return TrainAlgo::CrossEntropy;
  if (text == "vpg" || text == "vanilla-policy-gradient") return TrainAlgo::PolicyGradient;
  throw InvalidInputError("unknown training algorithm '" + std::string(text) + "'");
}

void TrainingLog::write_csv(std::ostream& out) const {
  out << "iteration,mean_reward,std_reward\n";
  for (const auto& e : entries) {
    out << e.iteration << ',' << detail::format_double(e.mean_reward) << ','
        << detail::format_double(e.std_reward) << '\n';
  }
}

double episode_return(Environment& env, const Agent& agent, std::uint64_t seed, ActMode mode,
                      Rng& rng) {
  StateVector s = env.reset(seed);
  double total = 0.0;
  while (!env.done()) {
    const StepResult r = env.step(agent.act(s, mode, rng));
    total += r.reward;
    s = r.next_state;
  }
  return total;
}

std::vector<double> evaluate_nominal(const Environment& env, const Agent& agent,
                                     std::uint64_t seed_base, int n, int jobs) {
  std::vector<double> returns(static_cast<std::size_t>(std::max(n, 0)));
  parallel_for(returns.size(), jobs, [&](std::size_t i) {
    auto local = env.clone();
    Rng unused(0);
    returns[i] = episode_return(*local, agent, seed_base + i, ActMode::Mean, unused);
  });
  return returns;
}

namespace {

class Adam {
 public:
  explicit Adam(std::size_t n, double lr) : lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

  /// Gradient descent step on `params`.
  void step(std::span<double> params, std::span<const double> grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * grad[i];
      v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * grad[i] * grad[i];
      params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + 1e-8);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  double lr_;
  int t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

std::vector<std::uint64_t> draw_seeds(Rng& rng, int n) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
  for (auto& s : seeds) s = rng() >> 1;  // keep clear of the held-out range arithmetic
  return seeds;
}

// ---------------------------------------------------------------------------
// Cross-entropy method

void train_cem(Agent& agent, const Environment& env, const TrainConfig& cfg, Rng& rng,
               TrainingLog& log) {
  auto* gaussian = dynamic_cast<GaussianPolicyAgent*>(&agent);
  const bool search_std = gaussian != nullptr && cfg.learn_log_std;
  const std::size_t n_behavior = agent.behavior_parameters().size();
  const std::size_t m = agent.action_dim();

  std::vector<double> mean = agent.behavior_parameters();
  if (search_std) {
    mean.insert(mean.end(), gaussian->log_std().data(), gaussian->log_std().data() + m);
  }
  const std::size_t dim = mean.size();
  std::vector<double> stddev(dim, cfg.initial_param_std);
  if (search_std) {
    // log_std starts from the configured value with a modest search width
    for (std::size_t i = n_behavior; i < dim; ++i) stddev[i] = 0.25;
  }

  const int n_elite =
      std::max(1, static_cast<int>(std::lround(cfg.elite_fraction * cfg.population)));
  std::vector<std::vector<double>> candidates(static_cast<std::size_t>(cfg.population));
  std::vector<double> fitness(candidates.size());

  for (int it = 0; it < cfg.iterations; ++it) {
    for (auto& c : candidates) {
      c.resize(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        std::normal_distribution<double> xi(0.0, 1.0);
        c[i] = mean[i] + stddev[i] * xi(rng);
      }
      for (std::size_t i = n_behavior; i < dim; ++i) {
        c[i] = std::clamp(c[i], cfg.min_log_std, cfg.max_log_std);
      }
    }
    const auto seeds = draw_seeds(rng, cfg.episodes_per_candidate);
    const std::uint64_t noise_seed = rng();

    parallel_for(candidates.size(), cfg.jobs, [&](std::size_t k) {
      auto candidate = agent.clone();
      const auto& c = candidates[k];
      candidate->set_behavior_parameters(std::span(c).first(n_behavior));
      double bonus = 0.0;
      if (search_std) {
        auto& g = static_cast<GaussianPolicyAgent&>(*candidate);
        const Eigen::VectorXd ls =
            Eigen::Map<const Eigen::VectorXd>(c.data() + n_behavior, static_cast<Eigen::Index>(m));
        g.set_log_std(ls);
        bonus = cfg.entropy_bonus * ls.sum();
      }
      auto local_env = env.clone();
      // Same action-noise stream for every candidate in this iteration.
      Rng noise(noise_seed);
      double total = 0.0;
      for (const auto seed : seeds) {
        total += episode_return(*local_env, *candidate, seed,
                                search_std ? ActMode::Sample : ActMode::Mean, noise);
      }
      fitness[k] = total / static_cast<double>(seeds.size()) + bonus;
    });

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });

    const double progress = cfg.iterations > 1 ? static_cast<double>(it) / (cfg.iterations - 1) : 1.0;
    const double extra =
        cfg.extra_noise_start + (cfg.extra_noise_end - cfg.extra_noise_start) * progress;
    for (std::size_t i = 0; i < dim; ++i) {
      double mu = 0.0;
      for (int e = 0; e < n_elite; ++e) mu += candidates[order[e]][i];
      mu /= n_elite;
      double var = 0.0;
      for (int e = 0; e < n_elite; ++e) {
        const double d = candidates[order[e]][i] - mu;
        var += d * d;
      }
      var /= n_elite;
      mean[i] = mu;
      stddev[i] = std::sqrt(var + extra * extra);
    }

    log.entries.push_back({it, stats::mean(fitness), stats::sample_std(fitness)});
  }

  agent.set_behavior_parameters(std::span(mean).first(n_behavior));
  if (search_std) {
    gaussian->set_log_std(
        Eigen::Map<const Eigen::VectorXd>(mean.data() + n_behavior, static_cast<Eigen::Index>(m)));
  }
}

// ---------------------------------------------------------------------------
// REINFORCE with a batch-mean baseline for the Gaussian policy.

void train_policy_gradient(GaussianPolicyAgent& agent, const Environment& env,
                           const TrainConfig& cfg, Rng& rng, TrainingLog& log) {
  Mlp& net = agent.mean_network();
  const std::size_t n_net = net.parameter_count();
  const std::size_t m = agent.action_dim();
  Adam adam(n_net + m, cfg.pg_learning_rate);
  auto local_env = env.clone();

  struct Sample {
    Eigen::VectorXd input;
    Eigen::VectorXd action;
    double ret = 0.0;
  };

  for (int it = 0; it < cfg.iterations; ++it) {
    std::vector<Sample> batch;
    std::vector<double> episode_returns;
    for (const auto seed : draw_seeds(rng, cfg.pg_episodes_per_iteration)) {
      StateVector s = local_env->reset(seed);
      std::vector<double> rewards;
      const std::size_t first = batch.size();
      while (!local_env->done()) {
        const ActionVector a = agent.act(s, ActMode::Sample, rng);
        batch.push_back({s.cwiseQuotient(agent.input_scale()), a, 0.0});
        const StepResult r = local_env->step(a);
        rewards.push_back(r.reward);
        s = r.next_state;
      }
      double g = 0.0;
      for (std::size_t t = rewards.size(); t-- > 0;) {
        g = rewards[t] + cfg.discount * g;
        batch[first + t].ret = g;
      }
      episode_returns.push_back(std::accumulate(rewards.begin(), rewards.end(), 0.0));
    }

    std::vector<double> rets;
    rets.reserve(batch.size());
    for (const auto& b : batch) rets.push_back(b.ret);
    const double baseline = stats::mean(rets);
    const double scale = std::max(stats::sample_std(rets), 1e-8);

    // Ascent on E[adv * log pi]; Adam minimizes, so accumulate the negative.
    std::vector<double> grad(n_net + m, 0.0);
    const Eigen::ArrayXd inv_var = (-2.0 * agent.log_std().array()).exp();
    for (const auto& b : batch) {
      const double adv = (b.ret - baseline) / scale;
      const Eigen::ArrayXd mean = net.forward(b.input).array().tanh();
      const Eigen::VectorXd diff = b.action - mean.matrix();
      const Eigen::VectorXd upstream =
          (-adv * diff.array() * inv_var * (1.0 - mean.square())).matrix();
      net.accumulate_gradient(b.input, upstream, std::span(grad).first(n_net));
      for (std::size_t i = 0; i < m; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        grad[n_net + i] += -adv * (diff[ii] * diff[ii] * inv_var[ii] - 1.0);
      }
    }
    for (auto& g : grad) g /= static_cast<double>(batch.size());

    std::vector<double> params = agent.parameters();
    adam.step(params, grad);
    for (std::size_t i = 0; i < m; ++i) {
      params[n_net + i] = std::clamp(params[n_net + i], cfg.min_log_std, cfg.max_log_std);
    }
    agent.set_parameters(params);

    log.entries.push_back({it, stats::mean(episode_returns), stats::sample_std(episode_returns)});
  }
}

// ---------------------------------------------------------------------------
// Critic fit. The environments are deterministic, so Q^mu(s, mu(s) + d) can be
// measured exactly: restore a snapshot, apply the offset action once, then
// follow mu. V is regressed on the unperturbed returns and the quadratic term
// on the drop caused by each probe. Both targets are standardized during the
// fit and the output layers are rescaled afterwards so Q is in return units.

double follow_nominal(Environment& env, const Agent& agent, const ActionVector& first,
                      const TrainConfig& cfg) {
  StepResult r = env.step(first);
  double total = r.reward;
  double weight = 1.0;
  for (int k = 1; k < cfg.critic_rollout_steps && !r.done; ++k) {
    weight *= cfg.discount;
    r = env.step(agent.nominal_action(r.next_state));
    total += weight * r.reward;
  }
  return total;
}

void rescale_output(Mlp& net, Eigen::Index row, double factor, double shift) {
  auto p = net.parameters();
  const auto hidden = static_cast<std::size_t>(net.hidden());
  const auto outs = static_cast<std::size_t>(net.outputs());
  const std::size_t b3 = p.size() - outs;
  const std::size_t w3 = b3 - outs * hidden;
  const auto r = static_cast<std::size_t>(row);
  for (std::size_t h = 0; h < hidden; ++h) p[w3 + h * outs + r] *= factor;
  p[b3 + r] = p[b3 + r] * factor + shift;
  net.set_parameters(p);
}

void fit_quadratic_critic(QuadraticQAgent& agent, const Environment& env, const TrainConfig& cfg,
                          Rng& rng) {
  const std::size_t m = agent.action_dim();
  const auto seeds = draw_seeds(rng, cfg.critic_episodes);

  struct Visit {
    Eigen::VectorXd input;
    double value = 0.0;
    std::vector<Eigen::VectorXd> offsets;
    std::vector<double> drops;
  };
  std::vector<std::vector<Visit>> per_episode(seeds.size());
  std::vector<std::uint64_t> noise_seeds(seeds.size());
  for (auto& n : noise_seeds) n = rng();

  parallel_for(seeds.size(), cfg.jobs, [&](std::size_t e) {
    auto live = env.clone();
    auto probe = env.clone();
    Rng noise(noise_seeds[e]);
    std::normal_distribution<double> xi(0.0, cfg.critic_action_noise);
    StateVector s = live->reset(seeds[e]);
    while (!live->done()) {
      const EnvSnapshot snap = live->snapshot();
      const ActionVector mu = agent.nominal_action(s);
      Visit v;
      v.input = s.cwiseQuotient(agent.input_scale());
      probe->restore(snap);
      v.value = follow_nominal(*probe, agent, mu, cfg);
      for (int j = 0; j < cfg.critic_probes; ++j) {
        Eigen::VectorXd d(static_cast<Eigen::Index>(m));
        for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = xi(noise);
        probe->restore(snap);
        v.drops.push_back(follow_nominal(*probe, agent, mu + d, cfg) - v.value);
        v.offsets.push_back(std::move(d));
      }
      per_episode[e].push_back(std::move(v));
      s = live->step(mu).next_state;
    }
  });

  std::vector<Visit> visits;
  for (auto& ep : per_episode) {
    for (auto& v : ep) visits.push_back(std::move(v));
  }
  std::vector<double> values;
  std::vector<double> drops;
  for (const auto& v : visits) {
    values.push_back(v.value);
    drops.insert(drops.end(), v.drops.begin(), v.drops.end());
  }
  const double value_mean = stats::mean(values);
  const double value_scale = std::max(stats::sample_std(values), 1e-6);
  double drop_scale = 0.0;
  for (double d : drops) drop_scale += d * d;
  drop_scale = std::max(std::sqrt(drop_scale / std::max<std::size_t>(drops.size(), 1)), 1e-6);

  // Fresh start: the critic is refit from scratch for the current mu.
  Mlp& chol = agent.cholesky_network();
  Mlp& value = agent.value_network();
  chol.initialize(rng);
  value.initialize(rng);
  const std::size_t n_chol = chol.parameter_count();
  const std::size_t n_value = value.parameter_count();
  Adam adam(n_chol + n_value, cfg.critic_learning_rate);
  std::uniform_int_distribution<std::size_t> pick(0, visits.size() - 1);
  std::uniform_int_distribution<int> pick_probe(0, std::max(cfg.critic_probes, 1) - 1);

  std::vector<double> params(n_chol + n_value);
  for (int step = 0; step < cfg.critic_steps; ++step) {
    std::vector<double> grad(n_chol + n_value, 0.0);
    for (int b = 0; b < cfg.critic_batch; ++b) {
      const Visit& v = visits[pick(rng)];
      const Eigen::VectorXd& x = v.input;
      const double v_residual = value.forward(x)[0] - (v.value - value_mean) / value_scale;
      value.accumulate_gradient(x, Eigen::VectorXd::Constant(1, v_residual),
                                std::span(grad).subspan(n_chol));
      if (v.offsets.empty()) continue;

      const auto j = static_cast<std::size_t>(pick_probe(rng));
      const Eigen::VectorXd& d = v.offsets[j];
      const Eigen::VectorXd raw = chol.forward(x);
      const Eigen::MatrixXd L = QuadraticQAgent::cholesky_from_raw(raw, m);
      const Eigen::VectorXd w = L.transpose() * d;
      const double residual = -w.squaredNorm() - v.drops[j] / drop_scale;

      // dQ/dL_ij = -2 d_i w_j on the lower triangle; chain through exp() on the diagonal.
      Eigen::VectorXd upstream(raw.size());
      Eigen::Index k = 0;
      for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(m); ++r) {
        for (Eigen::Index c = 0; c <= r; ++c) {
          const double dq = -2.0 * d[r] * w[c];
          upstream[k] = residual * (r == c ? dq * L(r, c) : dq);
          ++k;
        }
      }
      chol.accumulate_gradient(x, upstream, std::span(grad).first(n_chol));
    }
    for (auto& g : grad) g /= cfg.critic_batch;
    std::copy(chol.parameters().begin(), chol.parameters().end(), params.begin());
    std::copy(value.parameters().begin(), value.parameters().end(), params.begin() + n_chol);
    adam.step(params, grad);
    chol.set_parameters(std::span(params).first(n_chol));
    value.set_parameters(std::span(params).subspan(n_chol));
  }

  // Back to return units: V <- scale * V + mean, P <- scale * P (L <- sqrt(scale) * L).
  rescale_output(value, 0, value_scale, value_mean);
  const double root = std::sqrt(drop_scale);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(m); ++r) {
    for (Eigen::Index c = 0; c <= r; ++c) {
      if (r == c) {
        rescale_output(chol, k, 1.0, std::log(root));
      } else {
        rescale_output(chol, k, root, 0.0);
      }
      ++k;
    }
  }
}

}  // namespace

TrainResult train(const Agent& initial, const Environment& env, const TrainConfig& cfg) {
  if (initial.state_dim() != env.state_dim() || initial.action_dim() != env.action_dim()) {
    throw InvalidInputError("train: agent and environment dimensions differ");
  }
  if (cfg.iterations < 0) throw InvalidInputError("train: iterations must be >= 0");

  TrainResult result{initial.clone(), {}};
  if (cfg.iterations == 0) return result;

  Rng rng(cfg.seed);
  auto* gaussian = dynamic_cast<GaussianPolicyAgent*>(result.agent.get());
  if (gaussian != nullptr) {
    gaussian->set_log_std(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(env.action_dim()),
                                                    cfg.initial_log_std));
  }

  if (cfg.algo == TrainAlgo::CrossEntropy) {
    train_cem(*result.agent, env, cfg, rng, result.log);
  } else {
    if (gaussian == nullptr) {
      throw InvalidInputError("train: vanilla policy gradient needs a gaussian policy agent");
    }
    train_policy_gradient(*gaussian, env, cfg, rng, result.log);
  }

  if (auto* q = dynamic_cast<QuadraticQAgent*>(result.agent.get())) {
    fit_quadratic_critic(*q, env, cfg, rng);
  }

  const auto holdout =
      evaluate_nominal(env, *result.agent, cfg.holdout_seed_base, cfg.holdout_episodes, cfg.jobs);
  result.log.holdout_mean = stats::mean(holdout);
  result.log.holdout_std = stats::sample_std(holdout);
  if (!(result.log.holdout_mean > cfg.reward_threshold)) {
    throw TrainingFailedError("held-out mean reward " + std::to_string(result.log.holdout_mean) +
                                  " did not exceed threshold " +
                                  std::to_string(cfg.reward_threshold),
                              std::move(result.log));
  }
  return result;
}

}  // namespace actionraid
