#pragma once

// Correlation-based feature selection: subset merit from average
// feature-class and feature-feature correlations, searched best-first.

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "antvessel/selection/ranking.hpp"

namespace antvessel::selection {

/// Pearson correlation; 0 when either series is constant.
inline double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw UsageError("pearson: series lengths differ");
    if (x.size() < 2) throw UsageError("pearson: need at least 2 observations");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Absolute correlations: feature-class (class coded 0/1) and feature-feature.
struct CorrelationStats {
    std::array<double, kNumFeatures> r_cf{};
    std::array<std::array<double, kNumFeatures>, kNumFeatures> r_ff{};

    static CorrelationStats compute(const Columns& c) {
        CorrelationStats s;
        std::vector<double> cls(c.y.begin(), c.y.end());
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            s.r_cf[f] = std::abs(pearson(c.x[f], cls));
            s.r_ff[f][f] = 1.0;
            for (std::size_t g = 0; g < f; ++g) {
                double r = std::abs(pearson(c.x[f], c.x[g]));
                s.r_ff[f][g] = s.r_ff[g][f] = r;
            }
        }
        return s;
    }

    static CorrelationStats compute(const LabeledSampleSet& s) { return compute(Columns(s)); }
};

/// Standard: k + k(k-1) r_ff in the denominator. Printed: k + k(k+1) r_ff,
/// kept as a switchable alternative.
enum class MeritForm { Standard, Printed };

inline double cfs_merit(double k, double mean_rcf, double mean_rff, MeritForm form = MeritForm::Standard) {
    const double redundancy = form == MeritForm::Standard ? k * (k - 1) : k * (k + 1);
    return k * mean_rcf / std::sqrt(k + redundancy * mean_rff);
}

/// Merit of a subset. Mean r_ff is taken over distinct pairs (0 for k = 1).
inline double cfs_merit(const std::vector<FeatureId>& subset, const CorrelationStats& st,
                        MeritForm form = MeritForm::Standard) {
    if (subset.empty()) throw UsageError("cfs_merit: empty subset");
    const std::size_t k = subset.size();
    double rcf = 0, rff = 0;
    for (std::size_t i = 0; i < k; ++i) {
        rcf += st.r_cf[index_of(subset[i])];
        for (std::size_t j = i + 1; j < k; ++j) rff += st.r_ff[index_of(subset[i])][index_of(subset[j])];
    }
    rcf /= static_cast<double>(k);
    if (k > 1) rff /= static_cast<double>(k * (k - 1) / 2);
    return cfs_merit(static_cast<double>(k), rcf, rff, form);
}

inline double cfs_merit(const FeatureSubset& subset, const CorrelationStats& st, MeritForm form = MeritForm::Standard) {
    return cfs_merit(subset.members, st, form);
}

struct CfsOptions {
    int max_stale_expansions = 5;
    MeritForm form = MeritForm::Standard;
};

struct CfsResult {
    FeatureSubset subset;
    double merit = 0;
    std::size_t subsets_evaluated = 0;
};

/// Forward best-first search over subsets. The open list is ordered by merit,
/// ties by the subsets' FeatureId sequences; the search stops after
/// `max_stale_expansions` consecutive expansions that do not raise the best
/// merit.
inline CfsResult cfs_select(const LabeledSampleSet& samples, const CfsOptions& opt = {}) {
    Columns cols(samples);
    auto counts = cols.class_counts();
    if (cols.present_classes() < 2 || std::any_of(counts.begin(), counts.end(), [](auto n) { return n < 2; }))
        throw DataError("CFS needs at least 2 samples in each of 2 classes");
    bool any_varying = false;
    for (const auto& col : cols.x)
        any_varying = any_varying || std::any_of(col.begin(), col.end(), [&](double v) { return v != col.front(); });
    if (!any_varying) throw DataError("CFS: all features are constant");

    const auto st = CorrelationStats::compute(cols);
    using Mask = std::uint32_t;
    auto members = [](Mask m) {
        std::vector<FeatureId> out;
        for (std::size_t f = 0; f < kNumFeatures; ++f)
            if (m & (Mask{1} << f)) out.push_back(feature_at(f));
        return out;
    };
    // Lexicographic order of sorted member lists.
    auto lex_less = [&](Mask a, Mask b) { return members(a) < members(b); };

    struct Node {
        Mask mask;
        double merit;
    };
    std::vector<Node> open{{0, 0.0}};
    std::vector<char> visited(std::size_t{1} << kNumFeatures, 0);
    visited[0] = 1;
    Mask best = 0;
    double best_merit = 0.0;
    std::size_t evaluated = 0;
    int stale = 0;
    while (!open.empty() && stale < opt.max_stale_expansions) {
        auto it = std::min_element(open.begin(), open.end(), [&](const Node& a, const Node& b) {
            if (a.merit != b.merit) return a.merit > b.merit;
            return lex_less(a.mask, b.mask);
        });
        Node node = *it;
        open.erase(it);
        bool improved = false;
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            Mask child = node.mask | (Mask{1} << f);
            if (child == node.mask || visited[child]) continue;
            visited[child] = 1;
            double m = cfs_merit(members(child), st, opt.form);
            ++evaluated;
            open.push_back({child, m});
            if (m > best_merit + 1e-12 * std::max(1.0, best_merit)) {
                best = child;
                best_merit = m;
                improved = true;
            }
        }
        stale = improved ? 0 : stale + 1;
    }
    if (best == 0) throw DataError("CFS: no subset with positive merit (no feature correlates with the class)");
    return {FeatureSubset(members(best), "cfs"), best_merit, evaluated};
}

}  // namespace antvessel::selection
