#pragma once

#include <cstdio>
#include <string>

namespace rlogit {

// Decimal form with 17 significant digits; parses back to the same double.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace rlogit
