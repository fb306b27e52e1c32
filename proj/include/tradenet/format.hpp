#ifndef TRADENET_FORMAT_HPP
#define TRADENET_FORMAT_HPP

#include <charconv>
#include <string>

namespace tradenet {

// Shortest round-trip decimal form; keeps CSV output byte-stable across runs.
inline std::string fmt_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace tradenet

#endif  // TRADENET_FORMAT_HPP
