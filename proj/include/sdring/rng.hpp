#pragma once

#include <cmath>
#include <cstdint>

namespace sdring::rng {

// Bijective 64-bit mixer (splitmix64 finalizer).
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Keyed counter generator: every draw is a pure function of
// (seed, stream, index). Arrays can be filled in any order or from any
// worker without changing the realization.
inline constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                            std::uint64_t index) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    h = splitmix64(h ^ (0xbf58476d1ce4e5b9ULL * (index + 1)));
    return h;
}

// Uniform double in [0, 1) with 53 random bits.
inline double u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return static_cast<double>(counter_hash(seed, stream, index) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two counter draws.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const double u = u01(seed, stream, 2 * index);      // 1-u in (0,1], log stays finite
    const double v = u01(seed, stream, 2 * index + 1);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log1p(-u)) * std::cos(two_pi * v);
}

}  // namespace sdring::rng
