#pragma once

#include <cstdint>
#include <random>

namespace eigraph {

using Rng = std::mt19937_64;

// splitmix64 step; used only for deriving substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent substream seed for (master, stream). Repetition seeds are
// master + repetition index; streams split a single seed into the parts
// of a pipeline (structure, features, labels, splits, init).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ (stream * 0xD6E8FEB86659FD93ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace eigraph
