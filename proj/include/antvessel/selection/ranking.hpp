#pragma once

#include <algorithm>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "antvessel/feature_id.hpp"
#include "antvessel/sampling.hpp"

namespace antvessel::selection {

enum class Direction { HigherBetter, LowerBetter };

inline const char* to_string(Direction d) { return d == Direction::HigherBetter ? "higher-better" : "lower-better"; }

struct ScoredFeature {
    FeatureId feature;
    double score;
};

/// All 14 features ordered best-first; ties keep FeatureId order.
struct RankedFeatures {
    std::vector<ScoredFeature> entries;
    Direction direction = Direction::HigherBetter;

    static RankedFeatures from_scores(const FeatureVector& scores, Direction dir) {
        RankedFeatures r;
        r.direction = dir;
        for (std::size_t i = 0; i < kNumFeatures; ++i) r.entries.push_back({feature_at(i), scores[i]});
        std::stable_sort(r.entries.begin(), r.entries.end(), [dir](const ScoredFeature& a, const ScoredFeature& b) {
            return dir == Direction::HigherBetter ? a.score > b.score : a.score < b.score;
        });
        return r;
    }

    double score_of(FeatureId f) const {
        for (const auto& e : entries)
            if (e.feature == f) return e.score;
        throw UsageError("feature missing from ranking");
    }

    std::size_t position_of(FeatureId f) const {
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i].feature == f) return i;
        throw UsageError("feature missing from ranking");
    }
};

/// Members are kept sorted by FeatureId.
struct FeatureSubset {
    std::vector<FeatureId> members;
    std::string provenance;

    FeatureSubset() = default;
    FeatureSubset(std::vector<FeatureId> m, std::string prov) : members(std::move(m)), provenance(std::move(prov)) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
    }

    std::size_t size() const noexcept { return members.size(); }
    bool contains(FeatureId f) const { return std::binary_search(members.begin(), members.end(), f); }
};

inline FeatureSubset rank_to_subset(const RankedFeatures& r, std::size_t k, std::string provenance = {}) {
    if (k < 1 || k > kNumFeatures || k > r.entries.size())
        throw UsageError("subset size k must lie in [1, 14], got " + std::to_string(k));
    std::vector<FeatureId> m;
    for (std::size_t i = 0; i < k; ++i) m.push_back(r.entries[i].feature);
    return {std::move(m), std::move(provenance)};
}

/// Features present in every subset.
inline std::vector<FeatureId> common_features(const std::vector<FeatureSubset>& subsets) {
    if (subsets.empty()) return {};
    std::vector<FeatureId> common = subsets.front().members;
    for (const auto& s : subsets) {
        std::vector<FeatureId> next;
        std::set_intersection(common.begin(), common.end(), s.members.begin(), s.members.end(),
                              std::back_inserter(next));
        common = std::move(next);
    }
    return common;
}

inline double jaccard(const std::vector<FeatureId>& a, const std::vector<FeatureId>& b) {
    std::vector<FeatureId> sa(a), sb(b), inter, uni;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(uni));
    return uni.empty() ? 1.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
}

// Column-oriented view of a sample set shared by the heuristics.
struct Columns {
    std::vector<std::vector<double>> x;  // [feature][sample]
    std::vector<int> y;                  // class index per sample
    int n_classes = 0;

    explicit Columns(const LabeledSampleSet& s) : x(kNumFeatures) {
        for (auto& c : x) c.reserve(s.size());
        y.reserve(s.size());
        for (const auto& smp : s.samples) {
            for (std::size_t f = 0; f < kNumFeatures; ++f) x[f].push_back(smp.features[f]);
            y.push_back(class_index(smp.label));
            n_classes = std::max(n_classes, class_index(smp.label) + 1);
        }
    }

    std::size_t size() const noexcept { return y.size(); }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> c(static_cast<std::size_t>(n_classes), 0);
        for (int v : y) ++c[static_cast<std::size_t>(v)];
        return c;
    }

    std::size_t present_classes() const {
        auto c = class_counts();
        return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](auto n) { return n > 0; }));
    }
};

}  // namespace antvessel::selection
