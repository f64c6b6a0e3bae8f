#pragma once

#include <cstdint>

// Counter-based uniform random draws. Every draw is a pure hash of
// (seed, stream, a, b, c), so simulations can give each task/hop/attempt its
// own independent value without any sequential generator state. That keeps
// results identical regardless of event processing order and lets paired runs
// (same seed, different plan or different channel error) share randomness.

namespace uavplan {

namespace rng_stream {
constexpr std::uint64_t kPhase = 1;     // per-target task phase offset
constexpr std::uint64_t kChannel = 2;   // per (task, hop, attempt) loss draw
constexpr std::uint64_t kClassify = 3;  // per-task classification draw
constexpr std::uint64_t kGen = 4;       // scenario generation
}  // namespace rng_stream

inline std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_counters(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
  h = mix64(h ^ stream);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  return h;
}

// Uniform double in [0, 1), 53-bit resolution.
inline double u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                  std::uint64_t b = 0, std::uint64_t c = 0) {
  return static_cast<double>(hash_counters(seed, stream, a, b, c) >> 11) * 0x1.0p-53;
}

}  // namespace uavplan
