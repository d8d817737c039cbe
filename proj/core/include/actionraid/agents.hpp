#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "actionraid/envs.hpp"
#include "actionraid/mlp.hpp"

namespace actionraid {

enum class AgentKind : std::uint32_t { GaussianPolicy = 1, QuadraticQ = 2 };
enum class ActMode { Sample, Mean };
enum class GradientMethod { Analytic, Sampled };

std::string_view to_string(AgentKind kind);
AgentKind parse_agent_kind(std::string_view text);
std::string_view to_string(GradientMethod method);
GradientMethod parse_gradient_method(std::string_view text);

/// A nominal agent together with the differentiable proxy of reward over its
/// actions that the attacks descend on.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual AgentKind kind() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t action_dim() const = 0;

  /// Deterministic action: the policy mean, or argmax_a Q(s, a).
  virtual ActionVector nominal_action(const StateVector& s) const = 0;
  /// `Sample` draws from the policy; agents without exploration noise return
  /// the nominal action for both modes.
  virtual ActionVector act(const StateVector& s, ActMode mode, Rng& rng) const;

  virtual double surrogate_reward(const StateVector& s, const ActionVector& a) const = 0;
  /// Exact gradient of surrogate_reward with respect to the action.
  virtual Eigen::VectorXd surrogate_gradient(const StateVector& s, const ActionVector& a) const = 0;

  /// Everything that is persisted, in a fixed order.
  virtual std::vector<double> parameters() const = 0;
  virtual void set_parameters(std::span<const double> values) = 0;
  /// The subset of parameters that determines nominal_action(); what
  /// black-box trainers search over.
  virtual std::vector<double> behavior_parameters() const = 0;
  virtual void set_behavior_parameters(std::span<const double> values) = 0;

  /// Observation divisor applied before the networks.
  virtual const Eigen::VectorXd& input_scale() const = 0;

  virtual std::unique_ptr<Agent> clone() const = 0;
};

/// pi(a | s) = N(mean(s), diag(exp(log_std))^2) with mean(s) = tanh(f(s)) for a
/// 2x32 tanh network f, so the mean stays inside the [-1, 1] action box.
/// Surrogate reward is log pi(a | s).
class GaussianPolicyAgent final : public Agent {
 public:
  GaussianPolicyAgent(std::size_t state_dim, std::size_t action_dim, Eigen::VectorXd input_scale,
                      double initial_log_std = -1.0);

  AgentKind kind() const override { return AgentKind::GaussianPolicy; }
  std::size_t state_dim() const override { return static_cast<std::size_t>(mean_net_.inputs()); }
  std::size_t action_dim() const override { return static_cast<std::size_t>(mean_net_.outputs()); }

  ActionVector nominal_action(const StateVector& s) const override;
  ActionVector act(const StateVector& s, ActMode mode, Rng& rng) const override;
  double surrogate_reward(const StateVector& s, const ActionVector& a) const override;
  Eigen::VectorXd surrogate_gradient(const StateVector& s, const ActionVector& a) const override;

  std::vector<double> parameters() const override;
  void set_parameters(std::span<const double> values) override;
  std::vector<double> behavior_parameters() const override;
  void set_behavior_parameters(std::span<const double> values) override;
  const Eigen::VectorXd& input_scale() const override { return input_scale_; }

  std::unique_ptr<Agent> clone() const override;

  void initialize(Rng& rng);
  Mlp& mean_network() { return mean_net_; }
  const Mlp& mean_network() const { return mean_net_; }
  const Eigen::VectorXd& log_std() const { return log_std_; }
  void set_log_std(const Eigen::VectorXd& log_std);

 private:
  Eigen::VectorXd input_scale_;
  Mlp mean_net_;
  Eigen::VectorXd log_std_;
};

/// NAF-style value agent: Q(s, a) = V(s) - (a - mu(s))^T P(s) (a - mu(s)) with
/// P(s) = L(s) L(s)^T, L lower triangular with exp() on its diagonal so P is
/// always positive definite, and mu(s) = tanh(f(s)) inside the [-1, 1] action
/// box. Surrogate reward is Q itself.
class QuadraticQAgent final : public Agent {
 public:
  QuadraticQAgent(std::size_t state_dim, std::size_t action_dim, Eigen::VectorXd input_scale);

  AgentKind kind() const override { return AgentKind::QuadraticQ; }
  std::size_t state_dim() const override { return static_cast<std::size_t>(mu_net_.inputs()); }
  std::size_t action_dim() const override { return static_cast<std::size_t>(mu_net_.outputs()); }

  ActionVector nominal_action(const StateVector& s) const override;
  double surrogate_reward(const StateVector& s, const ActionVector& a) const override;
  Eigen::VectorXd surrogate_gradient(const StateVector& s, const ActionVector& a) const override;

  std::vector<double> parameters() const override;
  void set_parameters(std::span<const double> values) override;
  std::vector<double> behavior_parameters() const override;
  void set_behavior_parameters(std::span<const double> values) override;
  const Eigen::VectorXd& input_scale() const override { return input_scale_; }

  std::unique_ptr<Agent> clone() const override;

  void initialize(Rng& rng);
  double value(const StateVector& s) const;
  Eigen::MatrixXd cholesky_factor(const StateVector& s) const;
  Eigen::MatrixXd precision(const StateVector& s) const;

  Mlp& mu_network() { return mu_net_; }
  Mlp& cholesky_network() { return chol_net_; }
  Mlp& value_network() { return value_net_; }
  const Mlp& mu_network() const { return mu_net_; }
  const Mlp& cholesky_network() const { return chol_net_; }
  const Mlp& value_network() const { return value_net_; }

  /// Builds L from raw network outputs: row-major lower triangle, diagonal
  /// entries exponentiated.
  static Eigen::MatrixXd cholesky_from_raw(const Eigen::VectorXd& raw, std::size_t action_dim);

 private:
  Eigen::VectorXd scaled(const StateVector& s) const;

  Eigen::VectorXd input_scale_;
  Mlp mu_net_;
  Mlp chol_net_;
  Mlp value_net_;
};

struct SampledGradientOptions {
  int n_samples = 50;
  double sigma = 0.05;
};

/// Analytic: agent.surrogate_gradient. Sampled: least-squares linear fit of the
/// surrogate at a + sigma * xi_i (xi_i standard normal); returns the slope.
/// Throws InvalidInputError when sampled with n_samples < 2 * action_dim or
/// sigma <= 0.
Eigen::VectorXd surrogate_gradient(const Agent& agent, const StateVector& s, const ActionVector& a,
                                   GradientMethod method, const SampledGradientOptions& options,
                                   Rng& rng);

/// Throws InvalidInputError unless the environment's action box is [-1, 1].
std::unique_ptr<Agent> make_agent(AgentKind kind, const Environment& env);

}  // namespace actionraid
