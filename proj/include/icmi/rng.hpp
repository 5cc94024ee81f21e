#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace icmi {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used as a counter-based stream deriver: replica
// streams are a pure function of (master_seed, stream_index), so an ensemble
// is reproducible under any parallel schedule.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t stream_index)
{
    return splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index * 0xD1342543DE82EF95ull + 1));
}

inline Rng make_rng(std::uint64_t seed)
{
    return Rng(seed);
}

// Uniform in [0,1) with 53-bit resolution. Spelled out instead of
// std::uniform_real_distribution so streams are identical across standard
// library implementations.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n). Rejection sampling on raw engine words.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n)
{
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit)
        x = rng();
    return x % n;
}

} // namespace icmi
