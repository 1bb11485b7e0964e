#pragma once

// Sequential forward / backward selection wrapped around a k-nearest-neighbor
// classifier scored by stratified k-fold cross-validation.

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <vector>

#include "antvessel/rng.hpp"
#include "antvessel/selection/relief.hpp"

namespace antvessel::selection {

enum class SearchDirection { Forward, Backward };

struct WrapperOptions {
    int folds = 5;
    int neighbors = 5;
    /// Stop once the best step improves the CV error by less than this.
    double epsilon = 0.001;
    /// Larger sets are reduced by stratified subsampling before the search.
    std::size_t max_samples = 2000;
};

struct WrapperStep {
    std::vector<FeatureId> subset;
    double error = 0;
};

struct WrapperResult {
    FeatureSubset subset;
    double error = 0;
    std::vector<WrapperStep> trace;
    std::size_t samples_used = 0;
};

/// Cross-validated k-NN error over a fixed normalized dataset and fold split.
class KnnCrossValidator {
public:
    KnnCrossValidator(std::vector<FeatureVector> x, std::vector<int> y, int folds, int neighbors, std::uint64_t seed)
        : x_(std::move(x)), y_(std::move(y)), neighbors_(neighbors), fold_(y_.size()) {
        if (folds < 2) throw UsageError("cross-validation needs >= 2 folds");
        if (neighbors < 1) throw UsageError("k-NN needs k >= 1");
        n_classes_ = y_.empty() ? 0 : *std::max_element(y_.begin(), y_.end()) + 1;
        Rng rng(derive_seed({seed, 0xf01dULL}));
        for (int c = 0; c < n_classes_; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < y_.size(); ++i)
                if (y_[i] == c) members.push_back(i);
            std::shuffle(members.begin(), members.end(), rng);
            for (std::size_t r = 0; r < members.size(); ++r) fold_[members[r]] = static_cast<int>(r % folds);
        }
        folds_ = folds;
    }

    /// Fraction of misclassified held-out samples. An empty feature list
    /// predicts each fold's majority training class.
    double error(const std::vector<FeatureId>& features) const {
        std::size_t wrong = 0;
        std::vector<std::size_t> train, test;
        for (int f = 0; f < folds_; ++f) {
            train.clear();
            test.clear();
            for (std::size_t i = 0; i < y_.size(); ++i) (fold_[i] == f ? test : train).push_back(i);
            if (features.empty()) {
                std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes_), 0);
                for (auto i : train) ++counts[static_cast<std::size_t>(y_[i])];
                const int majority = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
                for (auto i : test) wrong += y_[i] != majority;
                continue;
            }
            for (auto i : test) wrong += predict(i, train, features) != y_[i];
        }
        return static_cast<double>(wrong) / static_cast<double>(y_.size());
    }

private:
    int predict(std::size_t q, const std::vector<std::size_t>& train, const std::vector<FeatureId>& features) const {
        struct Hit {
            double d;
            std::size_t i;
        };
        const auto k = static_cast<std::size_t>(neighbors_);
        std::vector<Hit> best;
        best.reserve(k + 1);
        for (auto j : train) {
            double d2 = 0;
            for (auto f : features) {
                const double d = x_[q][index_of(f)] - x_[j][index_of(f)];
                d2 += d * d;
            }
            if (best.size() == k && !(d2 < best.back().d)) continue;
            Hit h{d2, j};
            auto pos = std::upper_bound(best.begin(), best.end(), h,
                                        [](const Hit& a, const Hit& b) { return a.d < b.d || (a.d == b.d && a.i < b.i); });
            best.insert(pos, h);
            if (best.size() > k) best.pop_back();
        }
        std::vector<int> votes(static_cast<std::size_t>(n_classes_), 0);
        for (const auto& h : best) ++votes[static_cast<std::size_t>(y_[h.i])];
        return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    }

    std::vector<FeatureVector> x_;
    std::vector<int> y_;
    int neighbors_;
    int folds_ = 0;
    int n_classes_ = 0;
    std::vector<int> fold_;
};

/// Stratified seeded subsample keeping class proportions; identity when the
/// set already fits.
inline LabeledSampleSet stratified_subsample(const LabeledSampleSet& s, std::size_t max_samples, std::uint64_t seed) {
    if (s.size() <= max_samples) return s;
    LabeledSampleSet out;
    Rng rng(derive_seed({seed, 0x5b5aULL}));
    for (Label l : {Label::NonVessel, Label::Vessel}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.samples[i].label == l) idx.push_back(i);
        const auto keep = static_cast<std::size_t>(
            std::llround(static_cast<double>(idx.size()) * static_cast<double>(max_samples) / static_cast<double>(s.size())));
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(std::min(keep, idx.size()));
        std::sort(idx.begin(), idx.end());
        for (auto i : idx) out.samples.push_back(s.samples[i]);
    }
    return out;
}

/// Greedy SFS (from the empty set) or SBS (from all 14 features). Each step
/// takes the single addition/removal with the lowest CV error (ties: lowest
/// FeatureId) and the search stops when that step would improve the error by
/// less than epsilon. SFS always keeps its first pick; SBS never empties the set.
inline WrapperResult wrapper_select(const LabeledSampleSet& samples, SearchDirection dir, std::uint64_t seed,
                                    const WrapperOptions& opt = {}) {
    const auto min_per_class = std::min(samples.count(Label::Vessel), samples.count(Label::NonVessel));
    if (min_per_class < 20)
        throw DataError("wrapper selection needs >= 20 samples per class (have " + std::to_string(min_per_class) + ")");
    const auto data = stratified_subsample(samples, opt.max_samples, seed);
    std::vector<int> y;
    for (const auto& s : data.samples) y.push_back(class_index(s.label));
    KnnCrossValidator cv(range_normalized(data), std::move(y), opt.folds, opt.neighbors, seed);

    WrapperResult res;
    res.samples_used = data.size();
    std::vector<FeatureId> current;
    if (dir == SearchDirection::Backward) current.assign(kAllFeatures.begin(), kAllFeatures.end());
    double err = cv.error(current);
    res.trace.push_back({current, err});

    while (true) {
        if (dir == SearchDirection::Forward && current.size() == kNumFeatures) break;
        if (dir == SearchDirection::Backward && current.size() == 1) break;
        double best_err = std::numeric_limits<double>::infinity();
        std::vector<FeatureId> best;
        for (auto f : kAllFeatures) {
            const bool member = std::find(current.begin(), current.end(), f) != current.end();
            std::vector<FeatureId> cand;
            if (dir == SearchDirection::Forward) {
                if (member) continue;
                cand = current;
                cand.insert(std::upper_bound(cand.begin(), cand.end(), f), f);
            } else {
                if (!member) continue;
                for (auto g : current)
                    if (g != f) cand.push_back(g);
            }
            const double e = cv.error(cand);
            if (e < best_err) {
                best_err = e;
                best = std::move(cand);
            }
        }
        const bool first_pick = dir == SearchDirection::Forward && current.empty();
        if (err - best_err < opt.epsilon && !first_pick) break;
        current = std::move(best);
        err = best_err;
        res.trace.push_back({current, err});
    }
    res.subset = FeatureSubset(current, dir == SearchDirection::Forward ? "sfs" : "sbs");
    res.error = err;
    return res;
}

}  // namespace antvessel::selection
