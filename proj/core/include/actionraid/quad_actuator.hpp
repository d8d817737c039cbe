#pragma once

#include "actionraid/envs.hpp"

namespace actionraid {

struct QuadConstants {
  static constexpr int kVersion = 1;

  static constexpr double kDt = 0.05;
  static constexpr double kTorqueGain = 8.0;
  static constexpr double kJointDamping = 1.5;
  static constexpr double kJointSpring = 2.0;
  static constexpr double kMaxJointSpeed = 6.0;
  static constexpr double kHipLimit = 0.8;
  static constexpr double kKneeMin = 0.0;
  static constexpr double kKneeMax = 1.2;
  static constexpr double kKneeRest = 0.3;
  static constexpr double kContactKnee = 0.45;
  static constexpr double kContactSharpness = 12.0;
  static constexpr double kLegLength = 1.0;
  static constexpr double kProgressWeight = 10.0;
  static constexpr double kTorqueCost = 0.05;
  static constexpr double kClockHz = 1.0;
  static constexpr int kMaxSteps = 400;
  static constexpr double kRewardCap = 10.0;
};

/// Planar two-leg crawler with four torque inputs, ordered
/// (left hip, left knee, right hip, right knee), each in [-1, 1].
///
/// Joints are damped springs driven by torque. A leg grips the ground when its
/// knee is extended; a gripping hip swinging backwards pushes the body
/// forward. Reward is forward progress minus quadratic torque cost. The
/// observation carries a sin/cos gait clock so stateless policies can walk.
///
/// Observation: 4 joint angles, 4 joint speeds, body speed, sin(clock), cos(clock).
class QuadActuator final : public Environment {
 public:
  QuadActuator();

  std::string_view name() const override { return "quad_actuator"; }
  std::size_t state_dim() const override { return 11; }
  std::size_t action_dim() const override { return 4; }
  const ActionBounds& action_bounds() const override { return bounds_; }
  int max_steps() const override { return QuadConstants::kMaxSteps; }
  double reward_cap() const override { return QuadConstants::kRewardCap; }
  Eigen::VectorXd observation_scale() const override;

  StateVector reset(std::uint64_t seed) override;
  StepResult step(const ActionVector& action) override;
  StateVector observe() const override;
  bool done() const override { return done_; }
  std::uint64_t steps_taken() const override { return step_; }

  EnvSnapshot snapshot() const override;
  void restore(const EnvSnapshot& snapshot) override;
  std::unique_ptr<Environment> clone() const override;

  double body_position() const { return body_x_; }

 private:
  ActionBounds bounds_;
  Rng rng_;
  Eigen::Vector4d angle_ = Eigen::Vector4d::Zero();
  Eigen::Vector4d speed_ = Eigen::Vector4d::Zero();
  double body_x_ = 0.0;
  double body_v_ = 0.0;
  double clock_ = 0.0;
  bool started_ = false;
  bool done_ = false;
  std::uint64_t step_ = 0;
};

}  // namespace actionraid
