#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dimred {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and a key path, e.g.
/// (seed, setting id, repetition id). Equal paths give equal seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t s = mix64(base);
    for (auto k : keys) s = mix64(s ^ mix64(k + 0x632BE59BD9B4E019ULL));
    return s;
}

}  // namespace dimred
