#pragma once

// Counter-based seeding: every sample index gets its own generator, so results
// never depend on how the index space is split across workers.

#include <cstdint>
#include <random>

#include "snrlab/types.hpp"

namespace snrlab::detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index,
                              std::uint64_t stream = 0) noexcept {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

using Rng = std::mt19937_64;

inline Rng rng_for(std::uint64_t seed, std::uint64_t index, std::uint64_t stream = 0) {
  return Rng(mix_seed(seed, index, stream));
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  // 53 random bits; std::uniform_real_distribution is not bit-portable.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

// Box-Muller; kept local so sample streams are identical across standard
// libraries.
inline double gaussian(Rng& rng) {
  double u1 = uniform(rng);
  while (u1 <= 0.0) u1 = uniform(rng);
  const double u2 = uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline Complex complex_gaussian(Rng& rng) { return {gaussian(rng), gaussian(rng)}; }

inline Complex unit_phase(Rng& rng) {
  return std::polar(1.0, uniform(rng, -3.14159265358979323846, 3.14159265358979323846));
}

}  // namespace snrlab::detail
