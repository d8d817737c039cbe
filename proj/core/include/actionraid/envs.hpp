#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "actionraid/errors.hpp"

namespace actionraid {

using StateVector = Eigen::VectorXd;
using ActionVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

struct StepResult {
  StateVector next_state;
  double reward = 0.0;
  bool done = false;
};

struct ActionBounds {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  ActionVector clamp(const ActionVector& a) const { return a.cwiseMax(lo).cwiseMin(hi); }
  /// Mean per-dimension width; attack step sizes and budgets scale with it.
  double mean_range() const { return (hi - lo).mean(); }
};

/// Full copy of an environment's state. Serializes to a little-endian layout:
///
///   bytes  0..3   magic "ARSN"
///   u32           format version (1)
///   u32 + bytes   environment type tag
///   u64 + f64[n]  physics state, IEEE-754 binary64
///   u64 + bytes   RNG engine state (standard textual form of mt19937_64)
///   u64           step counter
///   u8            done flag
struct EnvSnapshot {
  static constexpr std::uint32_t kFormatVersion = 1;

  std::string env_type;
  std::vector<double> state;
  std::string rng_state;
  std::uint64_t step = 0;
  bool done = false;

  std::vector<std::uint8_t> to_bytes() const;
  static EnvSnapshot from_bytes(std::span<const std::uint8_t> bytes);

  friend bool operator==(const EnvSnapshot&, const EnvSnapshot&) = default;
};

/// Deterministic, seedable continuous-control environment. Out-of-range
/// actions are clamped to `action_bounds()` before they reach the dynamics.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t state_dim() const = 0;
  virtual std::size_t action_dim() const = 0;
  virtual const ActionBounds& action_bounds() const = 0;
  virtual int max_steps() const = 0;
  /// Upper bound on |reward| for any single step.
  virtual double reward_cap() const = 0;
  /// Typical magnitude of each observation entry; agents divide by it.
  virtual Eigen::VectorXd observation_scale() const = 0;

  virtual StateVector reset(std::uint64_t seed) = 0;
  /// Throws ProtocolError after the episode is done or before reset().
  virtual StepResult step(const ActionVector& action) = 0;
  virtual StateVector observe() const = 0;
  virtual bool done() const = 0;
  virtual std::uint64_t steps_taken() const = 0;

  virtual EnvSnapshot snapshot() const = 0;
  /// Throws InvalidInputError for a snapshot of another environment type.
  virtual void restore(const EnvSnapshot& snapshot) = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;
};

/// "lander_lite" or "quad_actuator".
std::unique_ptr<Environment> make_environment(std::string_view name);
std::vector<std::string> environment_names();

}  // namespace actionraid
