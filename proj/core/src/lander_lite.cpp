#include "actionraid/lander_lite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace actionraid {

namespace {

using C = LanderConstants;

std::string engine_state(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

}  // namespace

LanderLite::LanderLite() {
  bounds_.lo = Eigen::VectorXd::Constant(2, -1.0);
  bounds_.hi = Eigen::VectorXd::Constant(2, 1.0);
}

Eigen::VectorXd LanderLite::observation_scale() const {
  Eigen::VectorXd scale(5);
  scale << 5.0, 10.0, 2.0, 2.0, 1.0;
  return scale;
}

StateVector LanderLite::reset(std::uint64_t seed) {
  rng_.seed(seed);
  std::uniform_real_distribution<double> x0(-4.0, 4.0);
  std::uniform_real_distribution<double> y0(9.0, 11.0);
  std::uniform_real_distribution<double> vx0(-1.0, 1.0);
  std::uniform_real_distribution<double> vy0(-1.0, 0.0);
  x_ = x0(rng_);
  y_ = y0(rng_);
  vx_ = vx0(rng_);
  vy_ = vy0(rng_);
  landed_ = false;
  bonus_paid_ = false;
  started_ = true;
  done_ = false;
  step_ = 0;
  return observe();
}

double LanderLite::potential() const {
  return -C::kShapingDistanceWeight * std::hypot(x_, y_) -
         C::kShapingSpeedWeight * std::hypot(vx_, vy_);
}

StepResult LanderLite::step(const ActionVector& action) {
  if (!started_) throw ProtocolError("lander_lite: step() before reset()");
  if (done_) throw ProtocolError("lander_lite: step() after episode end");
  if (action.size() != 2 || !action.allFinite()) {
    throw InvalidInputError("lander_lite: action must be 2 finite values");
  }

  const ActionVector a = bounds_.clamp(action);
  const double throttle = std::max(a[0], 0.0);
  const double side = a[1];
  const double ax = C::kSideEngineAccel * side;
  const double ay = C::kMainEngineAccel * throttle - C::kGravity;

  const double phi_before = potential();
  double reward = -C::kFuelCost * (throttle + std::abs(side));

  // Semi-implicit Euler: velocity first, then position with the new velocity,
  // so a parked lander can actually leave the ground.
  bool integrate = true;
  if (landed_) {
    if (ay > 0.0) {
      landed_ = false;
    } else {
      integrate = false;
      reward += C::kRestReward;
    }
  }

  if (integrate) {
    vx_ += C::kDt * ax;
    vy_ += C::kDt * ay;
    x_ += C::kDt * vx_;
    y_ += C::kDt * vy_;

    if (y_ <= 0.0) {
      const bool soft = std::abs(x_) <= C::kPadHalfWidth && vy_ >= -C::kSafeVerticalSpeed &&
                        std::abs(vx_) <= C::kSafeLateralSpeed;
      y_ = 0.0;
      if (soft) {
        vx_ = 0.0;
        vy_ = 0.0;
        landed_ = true;
        if (!bonus_paid_) {
          bonus_paid_ = true;
          reward += C::kLandingBonus;
        }
      } else {
        reward += C::kCrashPenalty;
        done_ = true;
      }
    } else if (std::abs(x_) > C::kWorldHalfWidth || y_ > C::kCeiling) {
      reward += C::kCrashPenalty;
      done_ = true;
    }
  }

  reward += std::clamp(potential() - phi_before, -C::kShapingClip, C::kShapingClip);

  ++step_;
  if (step_ >= static_cast<std::uint64_t>(C::kMaxSteps)) done_ = true;
  return {observe(), reward, done_};
}

StateVector LanderLite::observe() const {
  StateVector s(5);
  s << x_, y_, vx_, vy_, landed_ ? 1.0 : 0.0;
  return s;
}

EnvSnapshot LanderLite::snapshot() const {
  EnvSnapshot snap;
  snap.env_type = std::string(name());
  snap.state = {x_, y_, vx_, vy_, landed_ ? 1.0 : 0.0, bonus_paid_ ? 1.0 : 0.0,
                started_ ? 1.0 : 0.0};
  snap.rng_state = engine_state(rng_);
  snap.step = step_;
  snap.done = done_;
  return snap;
}

void LanderLite::restore(const EnvSnapshot& snap) {
  if (snap.env_type != name() || snap.state.size() != 7) {
    throw InvalidInputError("lander_lite: cannot restore snapshot of type '" + snap.env_type + "'");
  }
  std::istringstream is(snap.rng_state);
  Rng rng;
  is >> rng;
  if (is.fail()) throw InvalidInputError("lander_lite: corrupt RNG state in snapshot");
  rng_ = rng;
  x_ = snap.state[0];
  y_ = snap.state[1];
  vx_ = snap.state[2];
  vy_ = snap.state[3];
  landed_ = snap.state[4] != 0.0;
  bonus_paid_ = snap.state[5] != 0.0;
  started_ = snap.state[6] != 0.0;
  step_ = snap.step;
  done_ = snap.done;
}

std::unique_ptr<Environment> LanderLite::clone() const {
  return std::make_unique<LanderLite>(*this);
}

}  // namespace actionraid
