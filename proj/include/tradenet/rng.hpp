#ifndef TRADENET_RNG_HPP
#define TRADENET_RNG_HPP

#include <cstdint>
#include <random>

namespace tradenet {

// All randomness flows through mt19937_64 seeded from explicit 64-bit values.
// The uniform helpers below are hand-rolled so that a given seed produces the
// same stream on every standard library implementation; std::uniform_*
// distributions leave their algorithm implementation-defined.

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent substream seed from (base, tag, index). Used to give
// each replication / purpose its own generator so that parallel execution
// cannot change results.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(base ^ splitmix64(tag)) + index);
}

// Uniform integer in [0, n) by rejection; n must be > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform integer in [lo, hi], inclusive.
inline long uniform_int(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(
                  uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

// Uniform double in [0, 1) with 53 bits of precision.
inline double uniform_real01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace tradenet

#endif  // TRADENET_RNG_HPP
