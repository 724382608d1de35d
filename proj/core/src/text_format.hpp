#pragma once

#include <charconv>
#include <string>

namespace rescatter::detail {

// Shortest text that parses back to the same double.
inline std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace rescatter::detail
