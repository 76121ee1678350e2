#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

// Deterministic text serialization: shortest round-trip decimals, the
// literal "inf" for divergences.

namespace microrev {

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_u64(std::uint64_t v) { return std::to_string(v); }

}  // namespace microrev
