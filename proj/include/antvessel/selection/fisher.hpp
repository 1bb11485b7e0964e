#pragma once

#include <limits>
#include <vector>

#include "antvessel/selection/ranking.hpp"

namespace antvessel::selection {

/// Per-class sample counts, means and (population) variances, plus the
/// overall per-feature mean.
struct ClassStats {
    std::vector<std::size_t> n;                 // [class]
    std::vector<FeatureVector> mean;            // [class][feature]
    std::vector<FeatureVector> variance;        // [class][feature]
    FeatureVector overall_mean{};

    static ClassStats compute(const Columns& c) {
        ClassStats s;
        const auto k = static_cast<std::size_t>(c.n_classes);
        s.n = c.class_counts();
        s.mean.assign(k, FeatureVector{});
        s.variance.assign(k, FeatureVector{});
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            const auto& col = c.x[f];
            double total = 0;
            for (std::size_t i = 0; i < col.size(); ++i) {
                s.mean[static_cast<std::size_t>(c.y[i])][f] += col[i];
                total += col[i];
            }
            s.overall_mean[f] = col.empty() ? 0.0 : total / static_cast<double>(col.size());
            for (std::size_t w = 0; w < k; ++w)
                if (s.n[w]) s.mean[w][f] /= static_cast<double>(s.n[w]);
            for (std::size_t i = 0; i < col.size(); ++i) {
                const auto w = static_cast<std::size_t>(c.y[i]);
                const double d = col[i] - s.mean[w][f];
                s.variance[w][f] += d * d;
            }
            for (std::size_t w = 0; w < k; ++w)
                if (s.n[w]) s.variance[w][f] /= static_cast<double>(s.n[w]);
        }
        return s;
    }
};

/// Stand-in score for features with zero within-class scatter and nonzero
/// between-class scatter; ranks them first while staying finite.
inline constexpr double kFisherUnbounded = std::numeric_limits<double>::max();

/// F_r = sum_w n_w (mu_wr - mu_r)^2 / sum_w n_w sigma^2_wr, higher is better.
inline RankedFeatures fisher_scores(const LabeledSampleSet& samples) {
    Columns cols(samples);
    if (cols.present_classes() < 2) throw DataError("Fisher score needs at least 2 classes");
    const auto st = ClassStats::compute(cols);
    FeatureVector score{};
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        double num = 0, den = 0;
        for (std::size_t w = 0; w < st.n.size(); ++w) {
            if (!st.n[w]) continue;
            const double nw = static_cast<double>(st.n[w]);
            const double d = st.mean[w][f] - st.overall_mean[f];
            num += nw * d * d;
            den += nw * st.variance[w][f];
        }
        if (den > 0) score[f] = num / den;
        else score[f] = num > 0 ? kFisherUnbounded : 0.0;
    }
    return RankedFeatures::from_scores(score, Direction::HigherBetter);
}

}  // namespace antvessel::selection
