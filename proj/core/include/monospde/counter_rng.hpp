#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace monospde {

/// Stateless counter-based random numbers: every draw is a pure function of
/// its key, so draws can be made in any order and from any thread.
namespace counter_rng {

/// splitmix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t hash(std::initializer_list<std::uint64_t> key) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::uint64_t k : key) h = mix(h ^ mix(k));
    return h;
}

/// Uniform in (0, 1], 53-bit resolution.
inline double uniform(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal by Box-Muller from two independent hashes of `key`.
inline double normal(std::uint64_t key) {
    const double u1 = uniform(mix(key ^ 0x5851f42d4c957f2dULL));
    const double u2 = uniform(mix(key ^ 0x14057b7ef767814fULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace counter_rng
}  // namespace monospde
