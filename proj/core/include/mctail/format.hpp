#pragma once

#include <cstdio>
#include <string>

namespace mctail {

// All floating-point CSV output is printed with 12 significant digits.
inline std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace mctail
