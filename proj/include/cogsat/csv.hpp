#pragma once

#include <cstdio>
#include <string>

namespace cogsat::csv {

// Shortest exact decimal form would be nicer to read, but %.17g guarantees
// value round-trip and byte-stable output, which the determinism contract
// needs.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

}  // namespace cogsat::csv
