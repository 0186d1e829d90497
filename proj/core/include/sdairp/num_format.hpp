#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace sdairp {

// Shortest decimal form that parses back to the same double. Keeps
// serialized instances and CSV output stable and human readable.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace sdairp
