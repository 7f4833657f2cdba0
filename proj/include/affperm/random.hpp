#pragma once

#include <cstdint>
#include <random>

#include "affperm/bigint.hpp"

namespace affperm {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Uniform real in [lo, hi).
inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Exactly uniform integer in [0, bound) by rejection on whole 64-bit words.
inline BigInt uniform_below(Rng& rng, const BigInt& bound) {
  const unsigned bits = boost::multiprecision::msb(bound) + 1;
  const unsigned words = (bits + 63) / 64;
  const unsigned excess = words * 64 - bits;
  for (;;) {
    BigInt r = 0;
    for (unsigned w = 0; w < words; ++w) {
      std::uint64_t word = rng();
      if (w == 0 && excess > 0) word >>= excess;
      r = (r << 64) | BigInt(word);
    }
    if (r < bound) return r;
  }
}

}  // namespace affperm
