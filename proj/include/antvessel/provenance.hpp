#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>

#include "antvessel/rng.hpp"

namespace antvessel {

inline constexpr const char* kToolName = "antvessel";
inline constexpr const char* kToolVersion = "0.1.0";

/// Stamp carried by every generated file.
struct Provenance {
    std::string config_hash = "0000000000000000";
    std::uint64_t seed = 0;

    /// Hash of the effective configuration (sorted key=value lines).
    static Provenance of(const std::map<std::string, std::string>& config, std::uint64_t seed) {
        std::string canon;
        for (const auto& [k, v] : config) canon += k + "=" + v + "\n";
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canon)));
        return {buf, seed};
    }

    std::string line() const {
        return std::string(kToolName) + " " + kToolVersion + " config=" + config_hash + " seed=" + std::to_string(seed);
    }
};

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Fixed-precision formatting for human-facing tables.
inline std::string format_fixed(double v, int digits = 2) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

}  // namespace antvessel
