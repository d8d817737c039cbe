#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include "actionraid/envs.hpp"
#include "schema_check.hpp"

namespace actionraid::cli {

namespace {

using nlohmann::json;

constexpr const char* kSchemaText =
#include "run_config_schema.inc"
    ;

template <typename T>
void take(const json& obj, const char* key, T& field) {
  if (obj.contains(key)) field = obj.at(key).get<T>();
}

AttackConfig parse_attack(const json& j, AttackConfig cfg) {
  if (j.contains("kind")) cfg.kind = parse_attack_kind(j.at("kind").get<std::string>());
  if (j.contains("p")) cfg.p_spatial = parse_norm_order(j.at("p").get<std::string>());
  if (j.contains("q")) cfg.q_temporal = parse_norm_order(j.at("q").get<std::string>());
  take(j, "b", cfg.b);
  take(j, "B", cfg.B);
  take(j, "H", cfg.H);
  take(j, "eta", cfg.eta);
  take(j, "n_pgd_steps", cfg.n_pgd_steps);
  take(j, "init_offset", cfg.init_offset);
  take(j, "max_step_halvings", cfg.max_step_halvings);
  if (j.contains("grad_method")) {
    cfg.grad_method = parse_gradient_method(j.at("grad_method").get<std::string>());
  }
  take(j, "n_samples", cfg.sampled.n_samples);
  take(j, "sigma", cfg.sampled.sigma);
  take(j, "rollout_perturbed", cfg.rollout_perturbed);
  take(j, "seed", cfg.seed);
  return cfg;
}

void parse_train(const json& j, TrainConfig& t) {
  if (j.contains("algo")) t.algo = parse_train_algo(j.at("algo").get<std::string>());
  take(j, "iterations", t.iterations);
  take(j, "seed", t.seed);
  take(j, "reward_threshold", t.reward_threshold);
  take(j, "holdout_episodes", t.holdout_episodes);
  take(j, "holdout_seed_base", t.holdout_seed_base);
  take(j, "population", t.population);
  take(j, "elite_fraction", t.elite_fraction);
  take(j, "episodes_per_candidate", t.episodes_per_candidate);
  take(j, "initial_param_std", t.initial_param_std);
  take(j, "extra_noise_start", t.extra_noise_start);
  take(j, "extra_noise_end", t.extra_noise_end);
  take(j, "initial_log_std", t.initial_log_std);
  take(j, "learn_log_std", t.learn_log_std);
  take(j, "entropy_bonus", t.entropy_bonus);
  take(j, "min_log_std", t.min_log_std);
  take(j, "max_log_std", t.max_log_std);
  take(j, "pg_episodes_per_iteration", t.pg_episodes_per_iteration);
  take(j, "pg_learning_rate", t.pg_learning_rate);
  take(j, "discount", t.discount);
  take(j, "critic_episodes", t.critic_episodes);
  take(j, "critic_probes", t.critic_probes);
  take(j, "critic_rollout_steps", t.critic_rollout_steps);
  take(j, "critic_steps", t.critic_steps);
  take(j, "critic_batch", t.critic_batch);
  take(j, "critic_learning_rate", t.critic_learning_rate);
  take(j, "critic_action_noise", t.critic_action_noise);
}

std::vector<NormOrder> parse_norms(const json& arr) {
  std::vector<NormOrder> out;
  for (const auto& v : arr) out.push_back(parse_norm_order(v.get<std::string>()));
  return out;
}

}  // namespace

const nlohmann::json& run_config_schema() {
  static const json schema = json::parse(kSchemaText);
  return schema;
}

RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  const auto errors = check_schema(doc, run_config_schema());
  if (!errors.empty()) {
    std::string msg = "config does not match schema:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }

  RunConfig cfg;
  cfg.env = doc.at("env").get<std::string>();
  const auto env = make_environment(cfg.env);
  const ActionBounds& bounds = env->action_bounds();

  if (doc.contains("agent")) {
    const auto& a = doc.at("agent");
    cfg.has_agent = true;
    cfg.agent.kind = parse_agent_kind(a.at("kind").get<std::string>());
    if (a.contains("weights")) {
      std::filesystem::path w = a.at("weights").get<std::string>();
      cfg.agent.weights = w.is_absolute() ? w : base_dir / w;
    }
  }
  if (doc.contains("train")) parse_train(doc.at("train"), cfg.train);
  if (doc.contains("attack")) {
    const auto& a = doc.at("attack");
    const AttackKind kind =
        a.contains("kind") ? parse_attack_kind(a.at("kind").get<std::string>()) : AttackKind::None;
    cfg.attack = parse_attack(a, AttackConfig::defaults_for(kind, bounds));
  }

  cfg.sweep.base = AttackConfig::defaults_for(AttackKind::None, bounds);
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    take(s, "budget_fractions", cfg.sweep.budget_fractions);
    take(s, "horizons", cfg.sweep.horizons);
    if (s.contains("spatial")) cfg.sweep.spatial = parse_norms(s.at("spatial"));
    if (s.contains("temporal")) cfg.sweep.temporal = parse_norms(s.at("temporal"));
    take(s, "include_random", cfg.sweep.include_random);
    take(s, "include_mas", cfg.sweep.include_mas);
    take(s, "include_las", cfg.sweep.include_las);
    if (s.contains("attack")) {
      if (s.at("attack").contains("kind")) {
        throw ConfigError("sweep.attack must not set 'kind'; the grid decides it");
      }
      cfg.sweep.base = parse_attack(s.at("attack"), cfg.sweep.base);
    }
  }

  take(doc, "n_episodes", cfg.n_episodes);
  take(doc, "base_seed", cfg.base_seed);
  take(doc, "jobs", cfg.jobs);
  if (doc.contains("out")) {
    std::filesystem::path o = doc.at("out").get<std::string>();
    cfg.out = o.is_absolute() ? o : base_dir / o;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  json doc;
  try {
    doc = json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

}  // namespace actionraid::cli
