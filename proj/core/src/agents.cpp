#include "actionraid/agents.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/QR>

namespace actionraid {

std::string_view to_string(AgentKind kind) {
  return kind == AgentKind::GaussianPolicy ? "gaussian" : "quadratic_q";
}

AgentKind parse_agent_kind(std::string_view text) {
  if (text == "gaussian") return AgentKind::GaussianPolicy;
  if (text == "quadratic_q") return AgentKind::QuadraticQ;
  throw InvalidInputError("unknown agent type '" + std::string(text) + "'");
}

std::string_view to_string(GradientMethod method) {
  return method == GradientMethod::Analytic ? "analytic" : "sampled";
}

GradientMethod parse_gradient_method(std::string_view text) {
  if (text == "analytic") return GradientMethod::Analytic;
  if (text == "sampled") return GradientMethod::Sampled;
  throw InvalidInputError("unknown gradient method '" + std::string(text) + "'");
}

ActionVector Agent::act(const StateVector& s, ActMode, Rng&) const { return nominal_action(s); }

namespace {

void require_dim(const Eigen::VectorXd& v, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    throw InvalidInputError(std::string(what) + ": expected length " + std::to_string(n) + ", got " +
                            std::to_string(v.size()));
  }
}

void append(std::vector<double>& out, std::span<const double> values) {
  out.insert(out.end(), values.begin(), values.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// GaussianPolicyAgent

GaussianPolicyAgent::GaussianPolicyAgent(std::size_t state_dim, std::size_t action_dim,
                                         Eigen::VectorXd input_scale, double initial_log_std)
    : input_scale_(std::move(input_scale)),
      mean_net_(static_cast<int>(state_dim), static_cast<int>(action_dim)),
      log_std_(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(action_dim), initial_log_std)) {
  require_dim(input_scale_, state_dim, "gaussian agent input scale");
}

void GaussianPolicyAgent::initialize(Rng& rng) { mean_net_.initialize(rng); }

void GaussianPolicyAgent::set_log_std(const Eigen::VectorXd& log_std) {
  require_dim(log_std, action_dim(), "log_std");
  if (!log_std.allFinite()) throw InvalidInputError("log_std must be finite");
  log_std_ = log_std;
}

ActionVector GaussianPolicyAgent::nominal_action(const StateVector& s) const {
  require_dim(s, state_dim(), "state");
  return mean_net_.forward(s.cwiseQuotient(input_scale_)).array().tanh().matrix();
}

ActionVector GaussianPolicyAgent::act(const StateVector& s, ActMode mode, Rng& rng) const {
  ActionVector a = nominal_action(s);
  if (mode == ActMode::Sample) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      std::normal_distribution<double> xi(0.0, 1.0);
      a[i] += std::exp(log_std_[i]) * xi(rng);
    }
  }
  return a;
}

double GaussianPolicyAgent::surrogate_reward(const StateVector& s, const ActionVector& a) const {
  require_dim(a, action_dim(), "action");
  const Eigen::ArrayXd z = (a - nominal_action(s)).array() / log_std_.array().exp();
  return -0.5 * z.square().sum() - log_std_.sum() -
         0.5 * static_cast<double>(a.size()) * std::log(2.0 * std::numbers::pi);
}

Eigen::VectorXd GaussianPolicyAgent::surrogate_gradient(const StateVector& s,
                                                        const ActionVector& a) const {
  require_dim(a, action_dim(), "action");
  const Eigen::ArrayXd variance = (2.0 * log_std_.array()).exp();
  return (-(a - nominal_action(s)).array() / variance).matrix();
}

std::vector<double> GaussianPolicyAgent::parameters() const {
  std::vector<double> out;
  append(out, mean_net_.parameters());
  append(out, {log_std_.data(), static_cast<std::size_t>(log_std_.size())});
  return out;
}

void GaussianPolicyAgent::set_parameters(std::span<const double> values) {
  const std::size_t n_net = mean_net_.parameter_count();
  if (values.size() != n_net + action_dim()) {
    throw InvalidInputError("gaussian agent: wrong parameter count");
  }
  mean_net_.set_parameters(values.first(n_net));
  set_log_std(Eigen::Map<const Eigen::VectorXd>(values.data() + n_net,
                                                static_cast<Eigen::Index>(action_dim())));
}

std::vector<double> GaussianPolicyAgent::behavior_parameters() const {
  const auto p = mean_net_.parameters();
  return {p.begin(), p.end()};
}

void GaussianPolicyAgent::set_behavior_parameters(std::span<const double> values) {
  mean_net_.set_parameters(values);
}

std::unique_ptr<Agent> GaussianPolicyAgent::clone() const {
  return std::make_unique<GaussianPolicyAgent>(*this);
}

// ---------------------------------------------------------------------------
// QuadraticQAgent

namespace {
int triangle_size(std::size_t m) { return static_cast<int>(m * (m + 1) / 2); }
}  // namespace

QuadraticQAgent::QuadraticQAgent(std::size_t state_dim, std::size_t action_dim,
                                 Eigen::VectorXd input_scale)
    : input_scale_(std::move(input_scale)),
      mu_net_(static_cast<int>(state_dim), static_cast<int>(action_dim)),
      chol_net_(static_cast<int>(state_dim), triangle_size(action_dim)),
      value_net_(static_cast<int>(state_dim), 1) {
  require_dim(input_scale_, state_dim, "quadratic agent input scale");
}

void QuadraticQAgent::initialize(Rng& rng) {
  mu_net_.initialize(rng);
  chol_net_.initialize(rng);
  value_net_.initialize(rng);
}

Eigen::VectorXd QuadraticQAgent::scaled(const StateVector& s) const {
  require_dim(s, state_dim(), "state");
  return s.cwiseQuotient(input_scale_);
}

Eigen::MatrixXd QuadraticQAgent::cholesky_from_raw(const Eigen::VectorXd& raw, std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      L(i, j) = (i == j) ? std::exp(raw[k]) : raw[k];
      ++k;
    }
  }
  return L;
}

ActionVector QuadraticQAgent::nominal_action(const StateVector& s) const {
  return mu_net_.forward(scaled(s)).array().tanh().matrix();
}

double QuadraticQAgent::value(const StateVector& s) const {
  return value_net_.forward(scaled(s))[0];
}

Eigen::MatrixXd QuadraticQAgent::cholesky_factor(const StateVector& s) const {
  return cholesky_from_raw(chol_net_.forward(scaled(s)), action_dim());
}

Eigen::MatrixXd QuadraticQAgent::precision(const StateVector& s) const {
  const Eigen::MatrixXd L = cholesky_factor(s);
  return L * L.transpose();
}

double QuadraticQAgent::surrogate_reward(const StateVector& s, const ActionVector& a) const {
  require_dim(a, action_dim(), "action");
  const Eigen::VectorXd d = a - nominal_action(s);
  const Eigen::VectorXd w = cholesky_factor(s).transpose() * d;
  return value(s) - w.squaredNorm();
}

Eigen::VectorXd QuadraticQAgent::surrogate_gradient(const StateVector& s,
                                                    const ActionVector& a) const {
  require_dim(a, action_dim(), "action");
  return -2.0 * precision(s) * (a - nominal_action(s));
}

std::vector<double> QuadraticQAgent::parameters() const {
  std::vector<double> out;
  append(out, mu_net_.parameters());
  append(out, chol_net_.parameters());
  append(out, value_net_.parameters());
  return out;
}

void QuadraticQAgent::set_parameters(std::span<const double> values) {
  const std::size_t a = mu_net_.parameter_count();
  const std::size_t b = chol_net_.parameter_count();
  const std::size_t c = value_net_.parameter_count();
  if (values.size() != a + b + c) throw InvalidInputError("quadratic agent: wrong parameter count");
  mu_net_.set_parameters(values.subspan(0, a));
  chol_net_.set_parameters(values.subspan(a, b));
  value_net_.set_parameters(values.subspan(a + b, c));
}

std::vector<double> QuadraticQAgent::behavior_parameters() const {
  const auto p = mu_net_.parameters();
  return {p.begin(), p.end()};
}

void QuadraticQAgent::set_behavior_parameters(std::span<const double> values) {
  mu_net_.set_parameters(values);
}

std::unique_ptr<Agent> QuadraticQAgent::clone() const {
  return std::make_unique<QuadraticQAgent>(*this);
}

// ---------------------------------------------------------------------------

Eigen::VectorXd surrogate_gradient(const Agent& agent, const StateVector& s, const ActionVector& a,
                                   GradientMethod method, const SampledGradientOptions& options,
                                   Rng& rng) {
  if (method == GradientMethod::Analytic) return agent.surrogate_gradient(s, a);

  const auto m = static_cast<Eigen::Index>(agent.action_dim());
  if (options.n_samples < 2 * m) {
    throw InvalidInputError("sampled gradient needs n_samples >= 2 * action_dim (" +
                            std::to_string(2 * m) + "), got " + std::to_string(options.n_samples));
  }
  if (!(options.sigma > 0.0)) throw InvalidInputError("sampled gradient needs sigma > 0");

  // Fit f(a + sigma xi) ~ c + g . (sigma xi) by least squares.
  Eigen::MatrixXd design(options.n_samples, m + 1);
  Eigen::VectorXd values(options.n_samples);
  for (int i = 0; i < options.n_samples; ++i) {
    Eigen::VectorXd offset(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      std::normal_distribution<double> xi(0.0, 1.0);
      offset[j] = options.sigma * xi(rng);
    }
    design(i, 0) = 1.0;
    design.row(i).tail(m) = offset.transpose();
    values[i] = agent.surrogate_reward(s, a + offset);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(values);
  return coef.tail(m);
}

std::unique_ptr<Agent> make_agent(AgentKind kind, const Environment& env) {
  const ActionBounds& box = env.action_bounds();
  if (!box.lo.isConstant(-1.0) || !box.hi.isConstant(1.0)) {
    throw InvalidInputError("make_agent: agents emit actions in [-1, 1]; environment '" +
                            std::string(env.name()) + "' uses another box");
  }
  if (kind == AgentKind::GaussianPolicy) {
    return std::make_unique<GaussianPolicyAgent>(env.state_dim(), env.action_dim(),
                                                 env.observation_scale());
  }
  return std::make_unique<QuadraticQAgent>(env.state_dim(), env.action_dim(),
                                           env.observation_scale());
}

}  // namespace actionraid
