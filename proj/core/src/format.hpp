#pragma once

#include <cstdio>
#include <optional>
#include <string>

namespace dtvcn::detail {

// Shortest round-trippable-enough text for CSV cells; fixed so output is
// byte-stable across runs.
inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : "NA"; }

}  // namespace dtvcn::detail
