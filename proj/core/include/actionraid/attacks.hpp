#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "actionraid/agents.hpp"
#include "actionraid/envs.hpp"
#include "actionraid/projections.hpp"

namespace actionraid {

enum class AttackKind { None, Random, Mas, Las };

std::string_view to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);

/// Parameters of one attack. `b` is the per-step budget (mas, random), `B`
/// and `H` the window budget and horizon (las).
struct AttackConfig {
  AttackKind kind = AttackKind::None;
  NormOrder p_spatial = NormOrder::L2;
  NormOrder q_temporal = NormOrder::L2;
  double b = 0.0;
  double B = 0.0;
  int H = 1;

  /// PGD step size on the surrogate. Default 0.05 x action range.
  double eta = 0.1;
  int n_pgd_steps = 10;
  /// Magnitude of the seeded random offset PGD starts from; the surrogate is
  /// stationary at the nominal action. Default 1e-3 x action range.
  double init_offset = 2e-3;
  /// Halvings tried when a PGD step would raise the surrogate.
  int max_step_halvings = 10;

  GradientMethod grad_method = GradientMethod::Analytic;
  SampledGradientOptions sampled;

  /// Advance the virtual roll-out with perturbed instead of nominal actions.
  bool rollout_perturbed = false;
  std::uint64_t seed = 0;

  /// Defaults with eta and init_offset scaled to the environment's action range.
  static AttackConfig defaults_for(AttackKind kind, const ActionBounds& bounds);

  /// Throws InvalidInputError when a field relevant to `kind` is out of range.
  void validate() const;
};

/// Unprojected PGD perturbation: starting from a + init_offset * u (u a seeded
/// random unit vector), take n_pgd_steps steps of a <- a - eta * grad, halving
/// eta whenever a step would increase the surrogate. Returns a_final - a, or
/// zero when no step was taken (flat surrogate).
Eigen::VectorXd pgd_perturbation(const Agent& agent, const StateVector& s,
                                 const ActionVector& nominal, const AttackConfig& cfg, Rng& rng);

/// Myopic attack: PGD perturbation projected onto the p_spatial ball of radius b.
ActionVector mas_attack_step(const Agent& agent, const StateVector& s, const AttackConfig& cfg,
                             Rng& rng);

/// delta' = b * u with u uniform on the unit p_spatial sphere.
ActionVector random_attack_step(std::size_t action_dim, const AttackConfig& cfg, Rng& rng);

struct PlannedAttack {
  PerturbationMatrix deltas;
  Eigen::VectorXd per_step_budgets;
  Eigen::VectorXd pre_projection_norms;
};

/// Look-ahead plan: restores `snapshot` into `adversary_env`, rolls out up to
/// `remaining_horizon` steps computing an unprojected PGD perturbation at each
/// virtual state, then projects the buffered sequence with
/// project_sequence(p_spatial, q_temporal, remaining_budget). The roll-out
/// stops early when the adversary environment reports done.
PlannedAttack las_plan(const Agent& agent, Environment& adversary_env, const EnvSnapshot& snapshot,
                       double remaining_budget, int remaining_horizon, const AttackConfig& cfg,
                       Rng& rng);

/// Receding-horizon driver for the look-ahead attack. Each step replans from
/// a snapshot of the nominal environment, applies only the first planned
/// perturbation, and charges its spatial norm against the window budget. The
/// budget and horizon reset once the window is used up.
class LasController {
 public:
  LasController(const AttackConfig& cfg, const Environment& env);

  struct Outcome {
    ActionVector nominal_action;
    ActionVector delta;
    StepResult result;
  };

  /// Attacks one step of `env` (which must be the same environment type).
  Outcome step(const Agent& agent, Environment& env, Rng& rng);

  double remaining_budget() const { return budget_; }
  int remaining_horizon() const { return horizon_; }
  const PlannedAttack* last_plan() const { return last_plan_ ? &*last_plan_ : nullptr; }

 private:
  AttackConfig cfg_;
  std::unique_ptr<Environment> adversary_env_;
  double budget_;
  int horizon_;
  std::optional<PlannedAttack> last_plan_;
};

}  // namespace actionraid
