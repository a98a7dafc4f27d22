#pragma once

#include <cstdio>
#include <string>

namespace tangle {

// Shortest decimal form that parses back to exactly the same double. Keeps
// CSVs and snapshots readable and byte-stable without locale surprises.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace tangle
