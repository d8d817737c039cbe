#pragma once

#include "actionraid/envs.hpp"

namespace actionraid {

/// Constants for LanderLite. Golden-value tests depend on these; bump
/// `kVersion` whenever any of them changes.
struct LanderConstants {
  static constexpr int kVersion = 1;

  static constexpr double kDt = 0.05;
  static constexpr double kGravity = 1.6;
  static constexpr double kMainEngineAccel = 4.0;
  static constexpr double kSideEngineAccel = 1.0;
  static constexpr double kFuelCost = 0.03;
  static constexpr double kShapingDistanceWeight = 2.0;
  static constexpr double kShapingSpeedWeight = 2.0;
  static constexpr double kShapingClip = 5.0;
  static constexpr double kRestReward = 0.1;
  static constexpr double kLandingBonus = 100.0;
  static constexpr double kCrashPenalty = -100.0;
  static constexpr double kPadHalfWidth = 1.5;
  static constexpr double kSafeVerticalSpeed = 1.0;
  static constexpr double kSafeLateralSpeed = 0.6;
  static constexpr double kWorldHalfWidth = 12.0;
  static constexpr double kCeiling = 20.0;
  static constexpr int kMaxSteps = 300;
  static constexpr double kRewardCap = 110.0;
};

/// 2D point-mass lander. State = (x, y, vx, vy, landed). Actions:
///   a[0] vertical (main) engine, throttle max(a[0], 0);
///   a[1] lateral engine, signed.
/// Touching the ground inside the pad below the safe speeds pays the landing
/// bonus once and parks the lander; anything else that reaches the ground or
/// leaves the world is a crash. A parked lander earns a small per-step reward
/// and lifts off again only if the main engine beats gravity.
class LanderLite final : public Environment {
 public:
  LanderLite();

  std::string_view name() const override { return "lander_lite"; }
  std::size_t state_dim() const override { return 5; }
  std::size_t action_dim() const override { return 2; }
  const ActionBounds& action_bounds() const override { return bounds_; }
  int max_steps() const override { return LanderConstants::kMaxSteps; }
  double reward_cap() const override { return LanderConstants::kRewardCap; }
  Eigen::VectorXd observation_scale() const override;

  StateVector reset(std::uint64_t seed) override;
  StepResult step(const ActionVector& action) override;
  StateVector observe() const override;
  bool done() const override { return done_; }
  std::uint64_t steps_taken() const override { return step_; }

  EnvSnapshot snapshot() const override;
  void restore(const EnvSnapshot& snapshot) override;
  std::unique_ptr<Environment> clone() const override;

 private:
  double potential() const;

  ActionBounds bounds_;
  Rng rng_;
  double x_ = 0.0;
  double y_ = 0.0;
  double vx_ = 0.0;
  double vy_ = 0.0;
  bool landed_ = false;
  bool bonus_paid_ = false;
  bool started_ = false;
  bool done_ = false;
  std::uint64_t step_ = 0;
};

}  // namespace actionraid
