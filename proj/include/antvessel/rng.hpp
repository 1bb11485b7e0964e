#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace antvessel {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Independent substream seed for a tuple of integer keys, e.g.
/// (global seed, iteration, ant). Order of keys matters.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto k : keys) h = splitmix64(h ^ splitmix64(k));
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) noexcept {
    return derive_seed({seed, fnv1a(name)});
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace antvessel
