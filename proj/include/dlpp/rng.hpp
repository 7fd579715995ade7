// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace dlpp::rng {

/// SplitMix64 output function (see https://prng.di.unimi.it).
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ull;

/// Counter-based draw: a pure function of (seed, i, j). Sites are keyed
/// independently, so any traversal order produces the same lattice.
constexpr std::uint64_t site_bits(std::uint64_t seed, std::uint64_t i, std::uint64_t j)
{
    const std::uint64_t key = mix64(seed + golden_gamma);
    const std::uint64_t a = mix64(key ^ (i * golden_gamma + 0x632be59bd9b4e019ull));
    return mix64(a + j * 0xd1b54a32d192ed03ull + golden_gamma);
}

/// Uniform in [0, 1) with 53 bits.
constexpr double to_unit(std::uint64_t bits)
{
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Standard exponential by inversion, -log(1 - u) with u in [0, 1).
inline double standard_exponential(std::uint64_t seed, std::uint64_t i, std::uint64_t j)
{
    return -std::log1p(-to_unit(site_bits(seed, i, j)));
}

/// Seed of trial k derived from a base seed. Trials never share a stream
/// and the mapping does not depend on how trials are scheduled.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t k)
{
    return mix64(mix64(base_seed ^ 0x5851f42d4c957f2dull) + (k + 1) * golden_gamma);
}

}  // namespace dlpp::rng
