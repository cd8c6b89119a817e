#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rmab {

// Finalizer from the splitmix64 generator. Bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a hash of a label string.
constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Counter-based stream seed derivation: any (master, label, counter) triple
// maps to a fixed 64-bit seed, so every run/replication is reproducible in
// isolation and streams never depend on evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                    std::uint64_t counter) {
  return mix64(mix64(master ^ hash_label(label)) + counter);
}

// Uniform double in [0,1) with a 53-bit mantissa. Written out explicitly
// (instead of std::uniform_real_distribution) so streams are bit-identical
// across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 make_stream(std::uint64_t master, std::string_view label,
                                   std::uint64_t counter) {
  return std::mt19937_64(derive_seed(master, label, counter));
}

}  // namespace rmab
