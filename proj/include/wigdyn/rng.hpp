#ifndef WIGDYN_RNG_HPP
#define WIGDYN_RNG_HPP

#include <cstdint>
#include <random>

namespace wigdyn {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent deterministic substream keyed by (seed, stream, purpose).
/// Streams for distinct keys are decorrelated by splitmix64 mixing, so
/// per-angle work can run on any worker layout with identical results.
inline std::mt19937_64 substream_engine(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t purpose = 0) {
  std::uint64_t s = seed;
  const std::uint64_t k0 = splitmix64(s);
  s ^= 0xd1342543de82ef95ULL * (stream + 1);
  const std::uint64_t k1 = splitmix64(s);
  s ^= 0xaf251af3b0f025b5ULL * (purpose + 1);
  const std::uint64_t k2 = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(k0), static_cast<std::uint32_t>(k0 >> 32),
                    static_cast<std::uint32_t>(k1), static_cast<std::uint32_t>(k1 >> 32),
                    static_cast<std::uint32_t>(k2), static_cast<std::uint32_t>(k2 >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform double in [0,1) with 53 random bits; avoids the
/// implementation-defined std::uniform_real_distribution.
inline double canonical_double(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace wigdyn

#endif
