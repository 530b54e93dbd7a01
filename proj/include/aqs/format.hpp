#pragma once

#include <cstdio>
#include <string>

namespace aqs {

// Numeric rendering used by every CSV and key=value emitter: 17 significant
// digits (round-trips a double exactly), C locale, negative zero normalized.
inline std::string g17(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace aqs
