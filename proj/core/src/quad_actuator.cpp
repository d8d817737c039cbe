#include "actionraid/quad_actuator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace actionraid {

namespace {

using C = QuadConstants;

bool is_knee(int joint) { return joint % 2 == 1; }

double grip(double knee_angle) {
  return 1.0 / (1.0 + std::exp(C::kContactSharpness * (knee_angle - C::kContactKnee)));
}

}  // namespace

QuadActuator::QuadActuator() {
  bounds_.lo = Eigen::VectorXd::Constant(4, -1.0);
  bounds_.hi = Eigen::VectorXd::Constant(4, 1.0);
}

Eigen::VectorXd QuadActuator::observation_scale() const {
  Eigen::VectorXd scale(11);
  scale << 1.0, 1.0, 1.0, 1.0, 6.0, 6.0, 6.0, 6.0, 3.0, 1.0, 1.0;
  return scale;
}

StateVector QuadActuator::reset(std::uint64_t seed) {
  rng_.seed(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (int j = 0; j < 4; ++j) {
    angle_[j] = (is_knee(j) ? C::kKneeRest : 0.0) + jitter(rng_);
  }
  speed_.setZero();
  body_x_ = 0.0;
  body_v_ = 0.0;
  clock_ = phase(rng_);
  started_ = true;
  done_ = false;
  step_ = 0;
  return observe();
}

StepResult QuadActuator::step(const ActionVector& action) {
  if (!started_) throw ProtocolError("quad_actuator: step() before reset()");
  if (done_) throw ProtocolError("quad_actuator: step() after episode end");
  if (action.size() != 4 || !action.allFinite()) {
    throw InvalidInputError("quad_actuator: action must be 4 finite values");
  }
  const ActionVector torque = bounds_.clamp(action);

  for (int j = 0; j < 4; ++j) {
    const double rest = is_knee(j) ? C::kKneeRest : 0.0;
    const double accel = C::kTorqueGain * torque[j] - C::kJointDamping * speed_[j] -
                         C::kJointSpring * (angle_[j] - rest);
    speed_[j] = std::clamp(speed_[j] + C::kDt * accel, -C::kMaxJointSpeed, C::kMaxJointSpeed);
    angle_[j] += C::kDt * speed_[j];

    const double lo = is_knee(j) ? C::kKneeMin : -C::kHipLimit;
    const double hi = is_knee(j) ? C::kKneeMax : C::kHipLimit;
    if (angle_[j] < lo || angle_[j] > hi) {
      angle_[j] = std::clamp(angle_[j], lo, hi);
      speed_[j] = 0.0;
    }
  }

  body_v_ = -C::kLegLength * 0.5 * (grip(angle_[1]) * speed_[0] + grip(angle_[3]) * speed_[2]);
  const double dx = C::kDt * body_v_;
  body_x_ += dx;
  clock_ = std::fmod(clock_ + 2.0 * std::numbers::pi * C::kClockHz * C::kDt,
                     2.0 * std::numbers::pi);

  const double reward = std::clamp(
      C::kProgressWeight * dx - C::kTorqueCost * torque.squaredNorm(), -C::kRewardCap,
      C::kRewardCap);

  ++step_;
  if (step_ >= static_cast<std::uint64_t>(C::kMaxSteps)) done_ = true;
  return {observe(), reward, done_};
}

StateVector QuadActuator::observe() const {
  StateVector s(11);
  s << angle_, speed_, body_v_, std::sin(clock_), std::cos(clock_);
  return s;
}

EnvSnapshot QuadActuator::snapshot() const {
  EnvSnapshot snap;
  snap.env_type = std::string(name());
  snap.state.assign(angle_.data(), angle_.data() + 4);
  snap.state.insert(snap.state.end(), speed_.data(), speed_.data() + 4);
  snap.state.push_back(body_x_);
  snap.state.push_back(body_v_);
  snap.state.push_back(clock_);
  snap.state.push_back(started_ ? 1.0 : 0.0);
  std::ostringstream os;
  os << rng_;
  snap.rng_state = os.str();
  snap.step = step_;
  snap.done = done_;
  return snap;
}

void QuadActuator::restore(const EnvSnapshot& snap) {
  if (snap.env_type != name() || snap.state.size() != 12) {
    throw InvalidInputError("quad_actuator: cannot restore snapshot of type '" + snap.env_type +
                            "'");
  }
  std::istringstream is(snap.rng_state);
  Rng rng;
  is >> rng;
  if (is.fail()) throw InvalidInputError("quad_actuator: corrupt RNG state in snapshot");
  rng_ = rng;
  for (int j = 0; j < 4; ++j) {
    angle_[j] = snap.state[j];
    speed_[j] = snap.state[4 + j];
  }
  body_x_ = snap.state[8];
  body_v_ = snap.state[9];
  clock_ = snap.state[10];
  started_ = snap.state[11] != 0.0;
  step_ = snap.step;
  done_ = snap.done;
}

std::unique_ptr<Environment> QuadActuator::clone() const {
  return std::make_unique<QuadActuator>(*this);
}

}  // namespace actionraid
