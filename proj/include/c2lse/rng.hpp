#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace c2lse {

// All randomness in the library flows through these helpers so that runs are
// reproducible bit-for-bit regardless of the standard library's distribution
// implementations.

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of the engine output.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal draw via the Box-Muller transform (two uniforms per draw,
/// no cached state).
inline double normal01(Rng& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Derive an independent stream seed from a base seed and a stream id.
inline std::uint64_t sub_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace c2lse
