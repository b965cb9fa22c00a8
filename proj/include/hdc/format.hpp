#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace hdc {

/// Shortest text that parses back to exactly `v`. NaN gives "nan".
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace hdc
