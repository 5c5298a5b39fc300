#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace wsrec {

// All randomized code in this library draws from these helpers instead of
// std::*_distribution, whose bit streams are implementation-defined. Pinning
// the mapping from mt19937_64 output to values keeps seeded runs reproducible
// across standard libraries.

/// Uniform double in [0, 1) from the top 53 bits of the generator output.
inline double uniform_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_range(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(gen);
}

/// Uniform integer in [0, n). Multiply-shift mapping; bias is O(n / 2^64).
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(gen()) * n) >> 64);
}

/// In-place Fisher-Yates shuffle driven by bounded().
template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& gen) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[bounded(gen, i)]);
  }
}

}  // namespace wsrec
