#include "actionraid/mlp.hpp"

#include <cmath>
#include <string>

namespace actionraid {

namespace {
using MatMap = Eigen::Map<const Eigen::MatrixXd>;
using VecMap = Eigen::Map<const Eigen::VectorXd>;
using MutMatMap = Eigen::Map<Eigen::MatrixXd>;
using MutVecMap = Eigen::Map<Eigen::VectorXd>;
}  // namespace

Mlp::Mlp(int inputs, int outputs, int hidden) : inputs_(inputs), outputs_(outputs), hidden_(hidden) {
  if (inputs < 1 || outputs < 1 || hidden < 1) {
    throw InvalidInputError("mlp: layer sizes must be positive");
  }
  const auto in = static_cast<std::size_t>(inputs);
  const auto out = static_cast<std::size_t>(outputs);
  const auto h = static_cast<std::size_t>(hidden);
  at_.w1 = 0;
  at_.b1 = at_.w1 + h * in;
  at_.w2 = at_.b1 + h;
  at_.b2 = at_.w2 + h * h;
  at_.w3 = at_.b2 + h;
  at_.b3 = at_.w3 + out * h;
  params_.assign(at_.b3 + out, 0.0);
}

void Mlp::set_parameters(std::span<const double> values) {
  if (values.size() != params_.size()) {
    throw InvalidInputError("mlp: expected " + std::to_string(params_.size()) + " parameters, got " +
                            std::to_string(values.size()));
  }
  params_.assign(values.begin(), values.end());
}

void Mlp::initialize(Rng& rng, double output_scale) {
  auto fill = [&](std::size_t offset, std::size_t count, int fan_in, double scale) {
    const double limit = scale / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (std::size_t i = 0; i < count; ++i) params_[offset + i] = u(rng);
  };
  std::fill(params_.begin(), params_.end(), 0.0);
  fill(at_.w1, at_.b1 - at_.w1, inputs_, 1.0);
  fill(at_.w2, at_.b2 - at_.w2, hidden_, 1.0);
  fill(at_.w3, at_.b3 - at_.w3, hidden_, output_scale);
}

Eigen::Map<Eigen::VectorXd> Mlp::output_bias() {
  return MutVecMap(params_.data() + at_.b3, outputs_);
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  const double* p = params_.data();
  const Eigen::VectorXd h1 =
      (MatMap(p + at_.w1, hidden_, inputs_) * x + VecMap(p + at_.b1, hidden_)).array().tanh();
  const Eigen::VectorXd h2 =
      (MatMap(p + at_.w2, hidden_, hidden_) * h1 + VecMap(p + at_.b2, hidden_)).array().tanh();
  return MatMap(p + at_.w3, outputs_, hidden_) * h2 + VecMap(p + at_.b3, outputs_);
}

void Mlp::accumulate_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& upstream,
                              std::span<double> grad) const {
  if (grad.size() != params_.size()) throw InvalidInputError("mlp: gradient buffer size mismatch");
  const double* p = params_.data();
  const MatMap w1(p + at_.w1, hidden_, inputs_);
  const MatMap w2(p + at_.w2, hidden_, hidden_);
  const MatMap w3(p + at_.w3, outputs_, hidden_);

  const Eigen::VectorXd h1 = (w1 * x + VecMap(p + at_.b1, hidden_)).array().tanh();
  const Eigen::VectorXd h2 = (w2 * h1 + VecMap(p + at_.b2, hidden_)).array().tanh();

  double* g = grad.data();
  MutMatMap(g + at_.w3, outputs_, hidden_) += upstream * h2.transpose();
  MutVecMap(g + at_.b3, outputs_) += upstream;

  const Eigen::VectorXd d2 = ((w3.transpose() * upstream).array() * (1.0 - h2.array().square())).matrix();
  MutMatMap(g + at_.w2, hidden_, hidden_) += d2 * h1.transpose();
  MutVecMap(g + at_.b2, hidden_) += d2;

  const Eigen::VectorXd d1 = ((w2.transpose() * d2).array() * (1.0 - h1.array().square())).matrix();
  MutMatMap(g + at_.w1, hidden_, inputs_) += d1 * x.transpose();
  MutVecMap(g + at_.b1, hidden_) += d1;
}

}  // namespace actionraid
