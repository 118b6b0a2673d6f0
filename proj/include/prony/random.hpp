#pragma once

#include <cstdint>
#include <random>

namespace prony {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent sub-seeds (per worker,
/// per block, per sweep cell) from a single master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace prony
