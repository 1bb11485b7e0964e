#pragma once

// Diagonal-Gaussian Bayes model over a feature subset. Its vessel posterior
// is the heuristic desirability ants follow during segmentation.

#include <cmath>
#include <vector>

#include "antvessel/features.hpp"
#include "antvessel/sampling.hpp"
#include "antvessel/selection/ranking.hpp"

namespace antvessel::acs {

inline constexpr double kVarianceFloor = 1e-6;

struct ClassifierModel {
    std::vector<FeatureId> subset;
    /// z-normalization fitted on the training samples, per subset member.
    std::vector<double> norm_mean, norm_std;
    /// [class][subset member] on the normalized scale; class 0 = non-vessel.
    std::vector<double> mean[2], variance[2];
    double prior[2] = {0.5, 0.5};

    /// Normalized value of subset member k for a raw feature vector.
    double normalized(const FeatureVector& v, std::size_t k) const {
        const double s = norm_std[k];
        return s > 0 ? (v[index_of(subset[k])] - norm_mean[k]) / s : 0.0;
    }

    /// Posterior probability of the vessel class.
    double posterior(const FeatureVector& v) const {
        double log_lik[2];
        for (int c = 0; c < 2; ++c) {
            double l = std::log(prior[c]);
            for (std::size_t k = 0; k < subset.size(); ++k) {
                const double d = normalized(v, k) - mean[c][k];
                l -= 0.5 * std::log(variance[c][k]) + d * d / (2.0 * variance[c][k]);
            }
            log_lik[c] = l;
        }
        return 1.0 / (1.0 + std::exp(log_lik[0] - log_lik[1]));
    }
};

/// Fits per-class means and population variances (floored at 1e-6) on
/// z-normalized subset features; priors are the class frequencies.
inline ClassifierModel train_model(const LabeledSampleSet& samples, const selection::FeatureSubset& subset) {
    if (subset.members.empty()) throw UsageError("train_model: empty feature subset");
    const std::size_t n_pos = samples.count(Label::Vessel), n_neg = samples.count(Label::NonVessel);
    if (n_pos == 0 || n_neg == 0) throw DataError("train_model: both classes must be present");

    ClassifierModel m;
    m.subset = subset.members;
    const std::size_t k = m.subset.size();
    const double n = static_cast<double>(samples.size());
    m.norm_mean.assign(k, 0.0);
    m.norm_std.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        const auto f = index_of(m.subset[j]);
        double sum = 0;
        for (const auto& s : samples.samples) sum += s.features[f];
        const double mu = sum / n;
        double ss = 0;
        for (const auto& s : samples.samples) ss += (s.features[f] - mu) * (s.features[f] - mu);
        m.norm_mean[j] = mu;
        m.norm_std[j] = std::sqrt(ss / n);
    }
    const double count[2] = {static_cast<double>(n_neg), static_cast<double>(n_pos)};
    for (int c = 0; c < 2; ++c) {
        m.mean[c].assign(k, 0.0);
        m.variance[c].assign(k, 0.0);
        m.prior[c] = count[c] / n;
    }
    for (const auto& s : samples.samples) {
        const int c = class_index(s.label);
        for (std::size_t j = 0; j < k; ++j) m.mean[c][j] += m.normalized(s.features, j);
    }
    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < k; ++j) m.mean[c][j] /= count[c];
    for (const auto& s : samples.samples) {
        const int c = class_index(s.label);
        for (std::size_t j = 0; j < k; ++j) {
            const double d = m.normalized(s.features, j) - m.mean[c][j];
            m.variance[c][j] += d * d;
        }
    }
    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < k; ++j) m.variance[c][j] = std::max(kVarianceFloor, m.variance[c][j] / count[c]);
    return m;
}

/// Vessel posterior per matrix row, in row order.
inline std::vector<double> heuristic_map(const FeatureMatrix& matrix, const ClassifierModel& model) {
    std::vector<double> eta;
    eta.reserve(matrix.rows.size());
    for (const auto& r : matrix.rows) eta.push_back(model.posterior(r.values));
    return eta;
}

}  // namespace antvessel::acs
