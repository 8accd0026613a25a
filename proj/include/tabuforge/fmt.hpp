#pragma once

#include <charconv>
#include <string>

namespace tabuforge {

// Shortest decimal string that round-trips the exact double. Used everywhere
// numbers land in text files so outputs are byte-reproducible.
inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace tabuforge
