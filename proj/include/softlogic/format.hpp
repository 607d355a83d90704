#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace softlogic::detail {

/// %.12g rendering used by every text export (CSV, LP, reports).
inline std::string format_g12(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}

/// Nearest double to the 12-significant-digit rendering of v.
inline double round_sig12(double v) {
  return std::strtod(format_g12(v).c_str(), nullptr);
}

}  // namespace softlogic::detail
