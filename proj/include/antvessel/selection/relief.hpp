#pragma once

// Relief: weights grow for features that separate an instance from its
// nearest miss and shrink for features that separate it from its nearest hit.

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "antvessel/rng.hpp"
#include "antvessel/selection/ranking.hpp"

namespace antvessel::selection {

inline constexpr std::size_t kDefaultReliefInstances = 2000;

struct ReliefResult {
    RankedFeatures ranking;
    FeatureVector weights{};
    /// Instances drawn (the divisor m in each update).
    std::size_t m = 0;
    /// Sample indices that were drawn but had no nearest hit.
    std::vector<std::size_t> skipped;
};

/// Range-normalized copy of the samples, row-major [sample][feature]; a
/// zero-range feature maps to 0 everywhere.
inline std::vector<FeatureVector> range_normalized(const LabeledSampleSet& samples) {
    FeatureVector lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& s : samples.samples)
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            lo[f] = std::min(lo[f], s.features[f]);
            hi[f] = std::max(hi[f], s.features[f]);
        }
    std::vector<FeatureVector> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            const double range = hi[f] - lo[f];
            out[i][f] = range > 0 ? (samples.samples[i].features[f] - lo[f]) / range : 0.0;
        }
    return out;
}

/// Draws `m` distinct instances with a seeded partial shuffle (m is capped at
/// the sample count), finds each one's nearest hit and miss by Euclidean
/// distance over range-normalized features (ties: lowest index) and applies
/// W(A) += (diff(A,X,M) - diff(A,X,H)) / m with diff = |a1 - a2| / range(A).
inline ReliefResult relief_weights(const LabeledSampleSet& samples, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw UsageError("relief: m must be >= 1");
    if (samples.count(Label::Vessel) == 0 || samples.count(Label::NonVessel) == 0)
        throw DataError("relief: both classes must be present");
    const std::size_t n = samples.size();
    m = std::min(m, n);
    const auto x = range_normalized(samples);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed({seed, 0x7e11efULL}));
    for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }

    ReliefResult out;
    out.m = m;
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t xi = idx[t];
        const Label cls = samples.samples[xi].label;
        const auto& xv = x[xi];
        double best_hit = std::numeric_limits<double>::infinity(), best_miss = best_hit;
        std::size_t hit = n, miss = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == xi) continue;
            double d2 = 0;
            for (std::size_t f = 0; f < kNumFeatures; ++f) {
                const double d = xv[f] - x[j][f];
                d2 += d * d;
            }
            if (samples.samples[j].label == cls) {
                if (d2 < best_hit) {
                    best_hit = d2;
                    hit = j;
                }
            } else if (d2 < best_miss) {
                best_miss = d2;
                miss = j;
            }
        }
        if (hit == n) {
            out.skipped.push_back(xi);
            continue;
        }
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            out.weights[f] -= std::abs(xv[f] - x[hit][f]) * inv_m;
            out.weights[f] += std::abs(xv[f] - x[miss][f]) * inv_m;
        }
    }
    out.ranking = RankedFeatures::from_scores(out.weights, Direction::HigherBetter);
    return out;
}

inline ReliefResult relief_weights(const LabeledSampleSet& samples, std::uint64_t seed) {
    return relief_weights(samples, std::min(kDefaultReliefInstances, samples.size()), seed);
}

}  // namespace antvessel::selection
