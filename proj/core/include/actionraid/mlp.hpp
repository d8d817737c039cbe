#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "actionraid/envs.hpp"

namespace actionraid {

/// Two hidden tanh layers and a linear output, parameters stored flat in the
/// order W1, b1, W2, b2, W3, b3 (weights column-major, shape out x in).
class Mlp {
 public:
  static constexpr int kDefaultHidden = 32;

  Mlp(int inputs, int outputs, int hidden = kDefaultHidden);

  int inputs() const { return inputs_; }
  int outputs() const { return outputs_; }
  int hidden() const { return hidden_; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }
  void set_parameters(std::span<const double> values);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases, output
  /// layer scaled by `output_scale`.
  void initialize(Rng& rng, double output_scale = 0.1);

  /// Final-layer bias, handy for building constant-output networks.
  Eigen::Map<Eigen::VectorXd> output_bias();

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  /// grad += d(upstream . f(x)) / d(params).
  void accumulate_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& upstream,
                           std::span<double> grad) const;

 private:
  struct Layout {
    std::size_t w1, b1, w2, b2, w3, b3;
  };

  int inputs_;
  int outputs_;
  int hidden_;
  Layout at_{};
  std::vector<double> params_;
};

}  // namespace actionraid
