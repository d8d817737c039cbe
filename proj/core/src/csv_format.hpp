#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace actionraid::detail {

/// Shortest round-trip decimal form; parsing it back yields the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace actionraid::detail
