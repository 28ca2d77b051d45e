#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace mnoswitch::experiments {

// Shortest representation that round-trips; identical output for identical
// doubles on every run.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return res.ec == std::errc() ? std::string(buf, res.ptr) : std::string("nan");
}

}  // namespace mnoswitch::experiments
