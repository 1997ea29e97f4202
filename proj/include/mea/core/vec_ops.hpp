#pragma once

#include <cmath>
#include <cstddef>

#include "mea/core/flow_system.hpp"

namespace mea::vec {

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

// out = x + s * y
inline Vec axpy(ConstView x, double s, ConstView y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + s * y[i];
  return out;
}

inline Vec scaled(ConstView x, double s) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
  return out;
}

inline Vec sub(ConstView x, ConstView y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

inline bool all_finite(ConstView x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace mea::vec
