#include "actionraid/weights_io.hpp"

#include <fstream>
#include <iterator>

#include "byte_io.hpp"

namespace actionraid {

namespace {
constexpr std::string_view kMagic = "ARWT";
}

std::vector<std::uint8_t> encode_weights(const Agent& agent) {
  detail::ByteWriter w;
  w.raw(kMagic);
  w.u32(kWeightsFormatVersion);
  w.u32(static_cast<std::uint32_t>(agent.kind()));
  w.u32(static_cast<std::uint32_t>(agent.state_dim()));
  w.u32(static_cast<std::uint32_t>(agent.action_dim()));
  w.u32(Mlp::kDefaultHidden);
  const Eigen::VectorXd& scale = agent.input_scale();
  w.u64(static_cast<std::uint64_t>(scale.size()));
  for (Eigen::Index i = 0; i < scale.size(); ++i) w.f64(scale[i]);
  const std::vector<double> params = agent.parameters();
  w.u64(params.size());
  for (double p : params) w.f64(p);
  return w.take();
}

std::unique_ptr<Agent> decode_weights(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "weights");
  if (r.raw(4) != kMagic) throw FormatError("weights: bad magic");
  if (const auto version = r.u32(); version != kWeightsFormatVersion) {
    throw FormatError("weights: unsupported format version " + std::to_string(version));
  }
  const auto kind = r.u32();
  const auto state_dim = r.u32();
  const auto action_dim = r.u32();
  const auto hidden = r.u32();
  if (hidden != Mlp::kDefaultHidden) throw FormatError("weights: unsupported hidden width");
  if (state_dim == 0 || action_dim == 0 || state_dim > 4096 || action_dim > 256) {
    throw FormatError("weights: implausible dimensions");
  }

  const auto n_scale = r.u64();
  if (n_scale != state_dim) throw FormatError("weights: input scale length mismatch");
  r.need(n_scale * 8);
  Eigen::VectorXd scale(static_cast<Eigen::Index>(n_scale));
  for (Eigen::Index i = 0; i < scale.size(); ++i) scale[i] = r.f64();

  std::unique_ptr<Agent> agent;
  switch (kind) {
    case static_cast<std::uint32_t>(AgentKind::GaussianPolicy):
      agent = std::make_unique<GaussianPolicyAgent>(state_dim, action_dim, scale);
      break;
    case static_cast<std::uint32_t>(AgentKind::QuadraticQ):
      agent = std::make_unique<QuadraticQAgent>(state_dim, action_dim, scale);
      break;
    default:
      throw FormatError("weights: unknown agent type tag " + std::to_string(kind));
  }

  const auto n_params = r.u64();
  if (n_params != agent->parameters().size()) throw FormatError("weights: parameter count mismatch");
  r.need(n_params * 8);
  std::vector<double> params(n_params);
  for (auto& p : params) p = r.f64();
  if (r.remaining() != 0) throw FormatError("weights: trailing bytes");
  try {
    agent->set_parameters(params);
  } catch (const InvalidInputError& e) {
    throw FormatError(std::string("weights: ") + e.what());
  }
  return agent;
}

std::unique_ptr<Agent> decode_weights(std::span<const std::uint8_t> bytes, AgentKind expected) {
  auto agent = decode_weights(bytes);
  if (agent->kind() != expected) {
    throw FormatError("weights: expected agent type '" + std::string(to_string(expected)) +
                      "', file holds '" + std::string(to_string(agent->kind())) + "'");
  }
  return agent;
}

void save_weights(const Agent& agent, const std::filesystem::path& path) {
  const auto bytes = encode_weights(agent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInputError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidInputError("failed writing '" + path.string() + "'");
}

std::unique_ptr<Agent> load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open weight file '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_weights(bytes);
}

}  // namespace actionraid
