#ifndef REVMINE_RNG_HPP
#define REVMINE_RNG_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace revmine {

// mt19937 output is pinned by the standard, but the stdlib distribution
// classes are not; sampling helpers are spelled out here so identical seeds
// give identical results on every platform.

inline std::mt19937 make_rng(std::uint32_t seed) { return std::mt19937(seed); }

/// Unbiased draw from [0, n). n must be > 0.
inline std::uint32_t bounded_rand(std::mt19937& rng, std::uint32_t n) {
  std::uint32_t limit = std::numeric_limits<std::uint32_t>::max() / n * n;
  std::uint32_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/// Fisher-Yates shuffle with a pinned draw sequence.
template <typename T>
void deterministic_shuffle(std::vector<T>& values, std::mt19937& rng) {
  for (std::size_t i = values.size(); i > 1; --i)
    std::swap(values[i - 1], values[bounded_rand(rng, static_cast<std::uint32_t>(i))]);
}

}  // namespace revmine

#endif  // REVMINE_RNG_HPP
