#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace quermass {

// Locale-independent decimal rendering with 17 significant digits, enough to
// round-trip any double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace quermass
