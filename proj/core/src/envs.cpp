#include "actionraid/envs.hpp"

#include "actionraid/lander_lite.hpp"
#include "actionraid/quad_actuator.hpp"
#include "byte_io.hpp"

namespace actionraid {

namespace {
constexpr std::string_view kSnapshotMagic = "ARSN";
}

std::vector<std::uint8_t> EnvSnapshot::to_bytes() const {
  detail::ByteWriter w;
  w.raw(kSnapshotMagic);
  w.u32(kFormatVersion);
  w.str32(env_type);
  w.u64(state.size());
  for (double v : state) w.f64(v);
  w.str64(rng_state);
  w.u64(step);
  w.u8(done ? 1 : 0);
  return w.take();
}

EnvSnapshot EnvSnapshot::from_bytes(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "snapshot");
  if (r.raw(4) != kSnapshotMagic) throw FormatError("snapshot: bad magic");
  if (const auto version = r.u32(); version != kFormatVersion) {
    throw FormatError("snapshot: unsupported version " + std::to_string(version));
  }
  EnvSnapshot snap;
  snap.env_type = r.str32();
  const auto n = r.u64();
  r.need(n * 8);
  snap.state.resize(n);
  for (auto& v : snap.state) v = r.f64();
  snap.rng_state = r.str64();
  snap.step = r.u64();
  snap.done = r.u8() != 0;
  if (r.remaining() != 0) throw FormatError("snapshot: trailing bytes");
  return snap;
}

std::unique_ptr<Environment> make_environment(std::string_view name) {
  if (name == "lander_lite") return std::make_unique<LanderLite>();
  if (name == "quad_actuator") return std::make_unique<QuadActuator>();
  throw InvalidInputError("unknown environment '" + std::string(name) + "'");
}

std::vector<std::string> environment_names() { return {"lander_lite", "quad_actuator"}; }

}  // namespace actionraid
