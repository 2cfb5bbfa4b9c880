#pragma once

#include <cstdint>
#include <random>

namespace cavitymod {

/// splitmix64 step; used to derive independent per-trial seeds from a base
/// seed so Monte-Carlo trials can run in any order (or in parallel) and
/// still be reproducible.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 1));
}

using Rng = std::mt19937_64;

}  // namespace cavitymod
