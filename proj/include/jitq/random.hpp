#pragma once

#include <cstdint>
#include <random>

namespace jitq {

// Every randomized routine draws from std::mt19937_64, whose output sequence
// is fixed by the C++ standard. A (seed, stream) pair is expanded into the
// engine's seed with one SplitMix64 step, so restart r of a run seeded with s
// always uses stream r. Doubles are built from the top 53 bits of one draw;
// no std:: distribution is used because their outputs vary across libraries.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 seeded_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

/// Uniform double in [0, 1).
inline double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace jitq
