#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace antrope {

// Shortest decimal string that round-trips to the same double. Keeps file
// output byte-stable across runs and platforms with the same binary.
inline std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace antrope
