#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "antvessel/selection/ranking.hpp"

namespace antvessel::selection {

/// Gini(S) = 1 - sum_i P_i^2 with P_i = s_i / s.
inline double gini_impurity(const std::vector<std::size_t>& class_counts) {
    const double s = static_cast<double>(std::accumulate(class_counts.begin(), class_counts.end(), std::size_t{0}));
    if (s == 0) return 0.0;
    double sum_sq = 0;
    for (auto c : class_counts) {
        const double p = static_cast<double>(c) / s;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

/// Equal-frequency bin index per sample. Bin b nominally covers sorted ranks
/// [b*s/n_bins, (b+1)*s/n_bins); tied values all go to the bin of the first
/// rank they occupy, so the assignment depends only on the values.
inline std::vector<int> equal_frequency_bins(const std::vector<double>& values, int n_bins) {
    const std::size_t s = values.size();
    std::vector<std::size_t> order(s);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<int> bin(s, 0);
    std::size_t group_start = 0;
    for (std::size_t r = 0; r < s; ++r) {
        if (r > 0 && values[order[r]] != values[order[r - 1]]) group_start = r;
        bin[order[r]] = static_cast<int>(group_start * static_cast<std::size_t>(n_bins) / s);
    }
    return bin;
}

/// Weighted Gini index of one feature after equal-frequency discretization:
/// sum_b (|b| / s) * Gini(b). Lower is better.
inline double gini_index(const std::vector<double>& values, const std::vector<int>& labels, int n_classes, int n_bins) {
    const auto bin = equal_frequency_bins(values, n_bins);
    std::vector<std::vector<std::size_t>> counts(static_cast<std::size_t>(n_bins),
                                                 std::vector<std::size_t>(static_cast<std::size_t>(n_classes), 0));
    for (std::size_t i = 0; i < values.size(); ++i)
        ++counts[static_cast<std::size_t>(bin[i])][static_cast<std::size_t>(labels[i])];
    const double s = static_cast<double>(values.size());
    double total = 0;
    for (const auto& c : counts) {
        const double size = static_cast<double>(std::accumulate(c.begin(), c.end(), std::size_t{0}));
        if (size > 0) total += size / s * gini_impurity(c);
    }
    return total;
}

inline RankedFeatures gini_scores(const LabeledSampleSet& samples, int n_bins = 10) {
    if (n_bins < 2) throw UsageError("gini: n_bins must be >= 2");
    Columns cols(samples);
    if (cols.size() == 0) throw DataError("gini: empty sample set");
    FeatureVector score{};
    for (std::size_t f = 0; f < kNumFeatures; ++f) score[f] = gini_index(cols.x[f], cols.y, cols.n_classes, n_bins);
    return RankedFeatures::from_scores(score, Direction::LowerBetter);
}

}  // namespace antvessel::selection
