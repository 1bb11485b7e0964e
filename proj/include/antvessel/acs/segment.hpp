#pragma once

// Vessel segmentation with pixel-walking ants.
//
// Ants start on the most vessel-like pixels not yet visited, walk over
// 8-connected FOV neighbors following tau * eta^beta, and after each
// iteration the trail with the highest mean eta is reinforced. The final
// score sigma = min(1, (tau / tau0) * eta / max(eta)) is thresholded, so
// pheromone above its initial level raises a pixel's Bayes score and
// pheromone below it lowers the score.

#include <algorithm>
#include <numeric>
#include <vector>

#include "antvessel/acs/classifier.hpp"
#include "antvessel/acs/core.hpp"
#include "antvessel/grid.hpp"

namespace antvessel::acs {

struct SegmentResult {
    BinaryMask mask;
    /// sigma in [0, 1] on FOV pixels, 0 elsewhere.
    GrayImage score;
    /// Vessel posterior on FOV pixels, 0 elsewhere.
    GrayImage eta;
    GrayImage pheromone;
};

/// Pixel-level variant taking a precomputed desirability map.
inline SegmentResult acs_segment(const GrayImage& eta, const BinaryMask& fov, const AcsParams& p, double threshold) {
    p.validate();
    require_same_shape(eta, fov, "eta vs FOV");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw UsageError("threshold must lie in [0, 1]");
    const auto fov_px = set_pixels(fov);
    if (fov_px.empty()) throw DataError("acs_segment: empty FOV");
    const int w = fov.width(), h = fov.height();

    SegmentResult res{BinaryMask(w, h), GrayImage(w, h, 0.0), eta, GrayImage(w, h, 0.0)};
    std::vector<double> tau(fov.size(), 0.0);
    std::vector<std::size_t> order;
    order.reserve(fov_px.size());
    for (const auto& px : fov_px) {
        order.push_back(fov.index(px.x, px.y));
        tau[order.back()] = p.tau0;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eta[a] > eta[b]; });

    std::vector<char> visited(fov.size(), 0), on_trail(fov.size(), 0);
    std::size_t cursor = 0;
    NodePheromone ph{tau};
    auto eta_at = [&](std::size_t i) { return eta[i]; };
    std::vector<std::size_t> cand;
    for (int it = 0; it < p.n_iterations; ++it) {
        std::vector<std::vector<std::size_t>> trails;
        for (int a = 0; a < p.n_ants; ++a) {
            while (cursor < order.size() && visited[order[cursor]]) ++cursor;
            if (cursor == order.size()) break;
            Rng rng(derive_seed({p.seed, static_cast<std::uint64_t>(it), static_cast<std::uint64_t>(a)}));
            std::vector<std::size_t> trail{order[cursor]};
            on_trail[trail[0]] = 1;
            visited[trail[0]] = 1;
            for (int step = 0; step < p.walk_length; ++step) {
                const int x = static_cast<int>(trail.back() % static_cast<std::size_t>(w));
                const int y = static_cast<int>(trail.back() / static_cast<std::size_t>(w));
                cand.clear();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (!dx && !dy) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (!fov.contains(nx, ny) || !fov(nx, ny)) continue;
                        const auto ni = fov.index(nx, ny);
                        if (!on_trail[ni]) cand.push_back(ni);
                    }
                if (cand.empty()) break;
                std::sort(cand.begin(), cand.end());
                const auto next = acs_step(std::span<const std::size_t>(cand), ph, eta_at, p, rng);
                trail.push_back(next);
                on_trail[next] = 1;
                visited[next] = 1;
            }
            for (auto i : trail) on_trail[i] = 0;
            trails.push_back(std::move(trail));
        }
        if (trails.empty()) continue;
        std::size_t best = 0;
        double best_mean = -1;
        for (std::size_t t = 0; t < trails.size(); ++t) {
            double s = 0;
            for (auto i : trails[t]) s += eta[i];
            const double mean = s / static_cast<double>(trails[t].size());
            if (mean > best_mean) {
                best_mean = mean;
                best = t;
            }
        }
        for (auto i : trails[best]) tau[i] = global_update(tau[i], best_mean, p);
    }

    double eta_max = 0;
    for (auto i : order) eta_max = std::max(eta_max, eta[i]);
    for (auto i : order) {
        const double sigma = eta_max > 0 ? std::min(1.0, tau[i] / p.tau0 * eta[i] / eta_max) : 0.0;
        res.score[i] = sigma;
        res.pheromone[i] = tau[i];
        res.mask[i] = sigma >= threshold ? 1 : 0;
    }
    return res;
}

/// Computes eta from the model over the feature rows (which must cover every
/// FOV pixel) and runs the pixel-level segmentation.
inline SegmentResult acs_segment(const FeatureMatrix& matrix, const BinaryMask& fov, const ClassifierModel& model,
                                 const AcsParams& p, double threshold) {
    GrayImage eta(fov.width(), fov.height(), 0.0);
    BinaryMask covered(fov.width(), fov.height(), 0);
    const auto values = heuristic_map(matrix, model);
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        const auto& row = matrix.rows[r];
        if (!fov.contains(row.x, row.y)) throw DataError("feature row outside the image bounds");
        eta(row.x, row.y) = values[r];
        covered(row.x, row.y) = 1;
    }
    for (std::size_t i = 0; i < fov.size(); ++i)
        if (fov[i] && !covered[i]) throw DataError("feature matrix does not cover every FOV pixel");
    for (std::size_t i = 0; i < fov.size(); ++i)
        if (!fov[i]) eta[i] = 0.0;
    return acs_segment(eta, fov, p, threshold);
}

}  // namespace antvessel::acs
