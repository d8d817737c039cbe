#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "actionraid/agents.hpp"

namespace actionraid {

/// Versioned little-endian weight format:
///
///   "ARWT" | u32 version | u32 agent kind | u32 state_dim | u32 action_dim |
///   u32 hidden width | u64 n + f64[n] input scale | u64 n + f64[n] parameters
inline constexpr std::uint32_t kWeightsFormatVersion = 1;

std::vector<std::uint8_t> encode_weights(const Agent& agent);
/// Throws FormatError on truncation, bad magic, version or type mismatch.
std::unique_ptr<Agent> decode_weights(std::span<const std::uint8_t> bytes);
/// Same as decode_weights, and additionally requires the given agent kind.
std::unique_ptr<Agent> decode_weights(std::span<const std::uint8_t> bytes, AgentKind expected);

void save_weights(const Agent& agent, const std::filesystem::path& path);
std::unique_ptr<Agent> load_weights(const std::filesystem::path& path);

}  // namespace actionraid
