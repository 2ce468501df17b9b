// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "lllkit/bigint.hpp"

namespace lllkit {

// Number of base-2 logarithms applied to n before the value is at most 1.
// Works on thresholds: log* n <= t iff n <= tower(t), tower(0) = 1,
// tower(t) = 2^tower(t-1).
inline unsigned log_star(const BigInt& n) {
  unsigned t = 0;
  BigInt tower = 1;
  while (n > tower) {
    ++t;
    if (tower >= 65536) return t;  // n <= 2^65536 for any representable input
    tower = ipow(BigInt(2), static_cast<std::uint64_t>(tower));
  }
  return t;
}

inline unsigned log_star(std::uint64_t n) { return log_star(BigInt(n)); }

// Least n >= 1 with log* n = t.
inline BigInt log_star_floor(unsigned t) {
  if (t == 0) return 1;
  BigInt tower = 1;
  for (unsigned i = 1; i < t; ++i)
    tower = ipow(BigInt(2), static_cast<std::uint64_t>(tower));
  return tower + 1;
}

}  // namespace lllkit
