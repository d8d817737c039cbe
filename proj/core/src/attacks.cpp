#include "actionraid/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace actionraid {

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::None: return "none";
    case AttackKind::Random: return "random";
    case AttackKind::Mas: return "mas";
    case AttackKind::Las: return "las";
  }
  return "none";
}

AttackKind parse_attack_kind(std::string_view text) {
  if (text == "none" || text == "nominal") return AttackKind::None;
  if (text == "random") return AttackKind::Random;
  if (text == "mas") return AttackKind::Mas;
  if (text == "las") return AttackKind::Las;
  throw InvalidInputError("unknown attack kind '" + std::string(text) + "'");
}

AttackConfig AttackConfig::defaults_for(AttackKind kind, const ActionBounds& bounds) {
  AttackConfig cfg;
  cfg.kind = kind;
  const double range = bounds.mean_range();
  cfg.eta = 0.05 * range;
  cfg.init_offset = 1e-3 * range;
  return cfg;
}

void AttackConfig::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidInputError("attack config: " + msg); };
  if (kind == AttackKind::None) return;
  if (kind == AttackKind::Las) {
    if (!std::isfinite(B) || B < 0.0) fail("B must be finite and >= 0");
    if (H < 1) fail("H must be >= 1");
  } else if (!std::isfinite(b) || b < 0.0) {
    fail("b must be finite and >= 0");
  }
  if (kind == AttackKind::Random) return;
  if (!(eta > 0.0) || !std::isfinite(eta)) fail("eta must be > 0");
  if (n_pgd_steps < 1) fail("n_pgd_steps must be >= 1");
  if (!(init_offset > 0.0) || !std::isfinite(init_offset)) fail("init_offset must be > 0");
  if (max_step_halvings < 0) fail("max_step_halvings must be >= 0");
  if (grad_method == GradientMethod::Sampled && !(sampled.sigma > 0.0)) fail("sigma must be > 0");
}

namespace {

Eigen::VectorXd random_unit_l2(std::size_t n, Rng& rng) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  double norm = 0.0;
  while (norm == 0.0) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      std::normal_distribution<double> xi(0.0, 1.0);
      u[i] = xi(rng);
    }
    norm = u.norm();
  }
  return u / norm;
}

/// Uniform on the unit l1 sphere: Dirichlet(1, ..., 1) magnitudes with random signs.
Eigen::VectorXd random_unit_l1(std::size_t n, Rng& rng) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  double total = 0.0;
  while (total == 0.0) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      std::exponential_distribution<double> e(1.0);
      std::bernoulli_distribution sign(0.5);
      const double mag = e(rng);
      u[i] = sign(rng) ? mag : -mag;
    }
    total = u.lpNorm<1>();
  }
  return u / total;
}

}  // namespace

Eigen::VectorXd pgd_perturbation(const Agent& agent, const StateVector& s,
                                 const ActionVector& nominal, const AttackConfig& cfg, Rng& rng) {
  ActionVector current = nominal + cfg.init_offset * random_unit_l2(agent.action_dim(), rng);
  double value = agent.surrogate_reward(s, current);
  bool moved = false;

  for (int it = 0; it < cfg.n_pgd_steps; ++it) {
    const Eigen::VectorXd grad =
        surrogate_gradient(agent, s, current, cfg.grad_method, cfg.sampled, rng);
    if (!grad.allFinite() || grad.isZero(0.0)) break;

    double step = cfg.eta;
    bool accepted = false;
    for (int h = 0; h <= cfg.max_step_halvings; ++h, step *= 0.5) {
      const ActionVector candidate = current - step * grad;
      const double candidate_value = agent.surrogate_reward(s, candidate);
      if (std::isfinite(candidate_value) && candidate_value <= value) {
        current = candidate;
        value = candidate_value;
        accepted = moved = true;
        break;
      }
    }
    if (!accepted) break;
  }
  // A flat surrogate gives no direction; the starting offset alone is noise.
  if (!moved) return Eigen::VectorXd::Zero(nominal.size());
  return current - nominal;
}

ActionVector mas_attack_step(const Agent& agent, const StateVector& s, const AttackConfig& cfg,
                             Rng& rng) {
  const ActionVector nominal = agent.nominal_action(s);
  const Eigen::VectorXd delta = pgd_perturbation(agent, s, nominal, cfg, rng);
  return project_ball(delta, cfg.p_spatial, Radius(cfg.b));
}

ActionVector random_attack_step(std::size_t action_dim, const AttackConfig& cfg, Rng& rng) {
  const Eigen::VectorXd u = cfg.p_spatial == NormOrder::L1 ? random_unit_l1(action_dim, rng)
                                                            : random_unit_l2(action_dim, rng);
  return cfg.b * u;
}

PlannedAttack las_plan(const Agent& agent, Environment& adversary_env, const EnvSnapshot& snapshot,
                       double remaining_budget, int remaining_horizon, const AttackConfig& cfg,
                       Rng& rng) {
  if (remaining_horizon < 1) throw InvalidInputError("las_plan: remaining horizon must be >= 1");
  const Radius budget(remaining_budget);
  adversary_env.restore(snapshot);
  if (adversary_env.done()) throw InvalidInputError("las_plan: snapshot of a finished episode");

  const Radius rollout_share(remaining_budget / remaining_horizon);
  std::vector<Eigen::VectorXd> buffer;
  buffer.reserve(static_cast<std::size_t>(remaining_horizon));
  for (int k = 0; k < remaining_horizon; ++k) {
    const StateVector s = adversary_env.observe();
    const ActionVector a = agent.nominal_action(s);
    buffer.push_back(pgd_perturbation(agent, s, a, cfg, rng));
    if (k + 1 == remaining_horizon) break;

    const ActionVector applied =
        cfg.rollout_perturbed ? ActionVector(a + project_ball(buffer.back(), cfg.p_spatial, rollout_share))
                              : a;
    if (adversary_env.step(applied).done) break;
  }

  Eigen::MatrixXd columns(static_cast<Eigen::Index>(agent.action_dim()),
                          static_cast<Eigen::Index>(buffer.size()));
  for (std::size_t k = 0; k < buffer.size(); ++k) {
    columns.col(static_cast<Eigen::Index>(k)) = buffer[k];
  }
  auto projected = project_sequence_detailed(PerturbationMatrix(std::move(columns)), cfg.p_spatial,
                                             cfg.q_temporal, budget);
  return {std::move(projected.deltas), std::move(projected.budgets),
          std::move(projected.column_norms)};
}

LasController::LasController(const AttackConfig& cfg, const Environment& env)
    : cfg_(cfg), adversary_env_(env.clone()), budget_(cfg.B), horizon_(cfg.H) {
  if (cfg.kind != AttackKind::Las) throw InvalidInputError("LasController needs kind = las");
  cfg.validate();
}

LasController::Outcome LasController::step(const Agent& agent, Environment& env, Rng& rng) {
  const EnvSnapshot snap = env.snapshot();
  PlannedAttack plan = las_plan(agent, *adversary_env_, snap, budget_, horizon_, cfg_, rng);

  Outcome out;
  const StateVector s = env.observe();
  out.nominal_action = agent.nominal_action(s);
  out.delta = plan.deltas.column(0);
  out.result = env.step(out.nominal_action + out.delta);

  budget_ = std::max(0.0, budget_ - norm_lp(out.delta, cfg_.p_spatial));
  if (--horizon_ == 0) {
    budget_ = cfg_.B;
    horizon_ = cfg_.H;
  }
  last_plan_ = std::move(plan);
  return out;
}

}  // namespace actionraid
