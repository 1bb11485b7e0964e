#pragma once

#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "antvessel/error.hpp"

namespace antvessel {

enum class FeatureId : int { Green, F1, F2, F3, F4, F5, Hu1, Hu2, Hu3, Hu4, Hu5, Hu6, Hu7, Hu8 };

inline constexpr std::size_t kNumFeatures = 14;

using FeatureVector = std::array<double, kNumFeatures>;

inline constexpr std::array<FeatureId, kNumFeatures> kAllFeatures{
    FeatureId::Green, FeatureId::F1,  FeatureId::F2,  FeatureId::F3,  FeatureId::F4,
    FeatureId::F5,    FeatureId::Hu1, FeatureId::Hu2, FeatureId::Hu3, FeatureId::Hu4,
    FeatureId::Hu5,   FeatureId::Hu6, FeatureId::Hu7, FeatureId::Hu8};

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames{
    "green", "f1", "f2", "f3", "f4", "f5", "hu1", "hu2", "hu3", "hu4", "hu5", "hu6", "hu7", "hu8"};

constexpr std::size_t index_of(FeatureId f) noexcept { return static_cast<std::size_t>(f); }
constexpr FeatureId feature_at(std::size_t i) noexcept { return static_cast<FeatureId>(i); }
constexpr std::string_view name_of(FeatureId f) noexcept { return kFeatureNames[index_of(f)]; }

constexpr bool is_hu(FeatureId f) noexcept { return index_of(f) >= index_of(FeatureId::Hu1); }

inline std::optional<FeatureId> parse_feature(std::string_view s) {
    std::string lower(s);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (std::size_t i = 0; i < kNumFeatures; ++i)
        if (kFeatureNames[i] == lower) return feature_at(i);
    return std::nullopt;
}

/// Parses "f2,hu1,green" style lists.
inline std::vector<FeatureId> parse_feature_list(std::string_view s) {
    std::vector<FeatureId> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto comma = s.find(',', start);
        auto tok = s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        if (!tok.empty()) {
            auto f = parse_feature(tok);
            if (!f) throw UsageError("unknown feature name '" + std::string(tok) + "'");
            out.push_back(*f);
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::string join_features(const std::vector<FeatureId>& fs, std::string_view sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (i) out += sep;
        out += name_of(fs[i]);
    }
    return out;
}

}  // namespace antvessel
