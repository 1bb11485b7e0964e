#pragma once

// Desk-scale synthetic fundus images: dark Bezier strokes over a bright,
// vignetted, noisy background inside a circular field of view.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "antvessel/dataset.hpp"
#include "antvessel/rng.hpp"

namespace antvessel {

struct SynthOptions {
    double noise_sigma = 8.0;
    double target_ratio = 7.0;  // non-vessel : vessel inside the FOV
    double min_width = 2.0;
    double max_width = 6.0;
};

namespace detail {

struct Point2 {
    double x = 0, y = 0;
};

struct Stroke {
    std::vector<Point2> polyline;
    double base_width = 0;
    double contrast = 0;
};

inline Point2 bezier(const std::array<Point2, 4>& c, double t) {
    double u = 1 - t;
    double b0 = u * u * u, b1 = 3 * u * u * t, b2 = 3 * u * t * t, b3 = t * t * t;
    return {b0 * c[0].x + b1 * c[1].x + b2 * c[2].x + b3 * c[3].x,
            b0 * c[0].y + b1 * c[1].y + b2 * c[2].y + b3 * c[3].y};
}

inline double segment_distance(Point2 p, Point2 a, Point2 b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double wx = p.x - a.x, wy = p.y - a.y;
    double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? std::clamp((wx * vx + wy * vy) / len2, 0.0, 1.0) : 0.0;
    double dx = wx - t * vx, dy = wy - t * vy;
    return std::sqrt(dx * dx + dy * dy);
}

// Per-pixel distance to each stroke's centerline, truncated to the first
// `length_fraction` of its polyline. Only pixels within `reach` are touched.
inline std::vector<std::vector<double>> stroke_distances(const std::vector<Stroke>& strokes, int w, int h,
                                                         double length_fraction, double reach) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dist(strokes.size(), std::vector<double>(static_cast<std::size_t>(w) * h, inf));
    for (std::size_t k = 0; k < strokes.size(); ++k) {
        const auto& pl = strokes[k].polyline;
        std::size_t nseg = pl.size() - 1;
        auto used = static_cast<std::size_t>(std::ceil(length_fraction * static_cast<double>(nseg)));
        used = std::clamp<std::size_t>(used, 1, nseg);
        for (std::size_t s = 0; s < used; ++s) {
            Point2 a = pl[s], b = pl[s + 1];
            int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - reach)));
            int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + reach)));
            int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - reach)));
            int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + reach)));
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x) {
                    double d = segment_distance({double(x), double(y)}, a, b);
                    auto& slot = dist[k][static_cast<std::size_t>(y) * w + x];
                    slot = std::min(slot, d);
                }
        }
    }
    return dist;
}

}  // namespace detail

/// Deterministic synthetic retina. Stroke widths (clamped to [2, 6] px) and,
/// if needed, stroke lengths are bisected so the FOV non-vessel:vessel ratio
/// lands near `target_ratio`.
inline DatasetEntry synth_retina(std::uint64_t seed, int width, int height, int n_vessels,
                                 const SynthOptions& opt = {}) {
    if (width < 64 || height < 64) {
        throw UsageError("synthetic retina needs width, height >= 64 (got " + std::to_string(width) + "x" +
                         std::to_string(height) + ")");
    }
    if (n_vessels < 0) throw UsageError("n_vessels must be >= 0");
    using detail::Point2;
    Rng rng(derive_seed({seed, 0x5717e71aULL, static_cast<std::uint64_t>(width), static_cast<std::uint64_t>(height),
                         static_cast<std::uint64_t>(n_vessels)}));
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };

    DatasetEntry e;
    e.image_id = "synth_" + std::to_string(seed);
    const double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
    const double radius = 0.47 * std::min(width, height);
    e.fov = BinaryMask(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) e.fov(x, y) = std::hypot(x - cx, y - cy) <= radius ? 1 : 0;
    const std::size_t fov_count = count_set(e.fov);

    std::vector<detail::Stroke> strokes(static_cast<std::size_t>(n_vessels));
    for (auto& s : strokes) {
        double a0 = uni(0, 2 * std::numbers::pi);
        double a3 = a0 + std::numbers::pi + uni(-0.9, 0.9);
        double r0 = radius * uni(0.3, 1.0), r3 = radius * uni(0.3, 1.0);
        std::array<Point2, 4> c{Point2{cx + r0 * std::cos(a0), cy + r0 * std::sin(a0)},
                                Point2{cx + uni(-0.7, 0.7) * radius, cy + uni(-0.7, 0.7) * radius},
                                Point2{cx + uni(-0.7, 0.7) * radius, cy + uni(-0.7, 0.7) * radius},
                                Point2{cx + r3 * std::cos(a3), cy + r3 * std::sin(a3)}};
        constexpr int kSamples = 96;
        for (int i = 0; i <= kSamples; ++i) s.polyline.push_back(detail::bezier(c, double(i) / kSamples));
        s.base_width = uni(opt.min_width, opt.max_width);
        s.contrast = uni(40.0, 60.0);
    }

    const double reach = opt.max_width / 2 + 1.5;
    auto widths_for = [&](double scale) {
        std::vector<double> w;
        for (const auto& s : strokes) w.push_back(std::clamp(s.base_width * scale, opt.min_width, opt.max_width));
        return w;
    };
    auto count_vessel = [&](const std::vector<std::vector<double>>& dist, const std::vector<double>& widths) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < e.fov.size(); ++i) {
            if (!e.fov[i]) continue;
            for (std::size_t k = 0; k < dist.size(); ++k)
                if (dist[k][i] <= widths[k] / 2) {
                    ++n;
                    break;
                }
        }
        return n;
    };

    const double target = static_cast<double>(fov_count) / (1.0 + opt.target_ratio);
    double scale = 1.0, fraction = 1.0;
    auto dist = detail::stroke_distances(strokes, width, height, 1.0, reach);
    if (n_vessels > 0) {
        double lo = 0.0, hi = opt.max_width / opt.min_width;
        if (static_cast<double>(count_vessel(dist, widths_for(lo))) > target) {
            // Thinnest strokes still overshoot: shorten them instead.
            scale = lo;
            double flo = 0.0, fhi = 1.0;
            for (int it = 0; it < 24; ++it) {
                double mid = (flo + fhi) / 2;
                auto d = detail::stroke_distances(strokes, width, height, mid, reach);
                if (static_cast<double>(count_vessel(d, widths_for(scale))) > target) fhi = mid;
                else flo = mid;
            }
            fraction = (flo + fhi) / 2;
            dist = detail::stroke_distances(strokes, width, height, fraction, reach);
        } else {
            for (int it = 0; it < 40; ++it) {
                double mid = (lo + hi) / 2;
                if (static_cast<double>(count_vessel(dist, widths_for(mid))) > target) hi = mid;
                else lo = mid;
            }
            scale = (lo + hi) / 2;
        }
    }
    const auto widths = widths_for(scale);

    std::normal_distribution<double> noise(0.0, opt.noise_sigma);
    e.truth = BinaryMask(width, height);
    e.image = RgbImage(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            std::size_t i = e.fov.index(x, y);
            double rho = std::hypot(x - cx, y - cy) / radius;
            double g;
            if (e.fov[i]) {
                g = 155.0 - 35.0 * rho * rho;
                double drop = 0.0;
                bool vessel = false;
                for (std::size_t k = 0; k < strokes.size(); ++k) {
                    double half = widths[k] / 2;
                    double d = dist[k][i];
                    if (d <= half) vessel = true;
                    double profile = std::clamp(half + 0.5 - d, 0.0, 1.0);
                    drop = std::max(drop, profile * strokes[k].contrast);
                }
                g -= drop;
                (*e.truth)[i] = vessel ? 1 : 0;
            } else {
                g = 6.0;
            }
            g += noise(rng);
            double gc = std::clamp(std::round(g), 0.0, 255.0);
            e.image[i] = {static_cast<std::uint8_t>(std::clamp(std::round(gc * 1.55 + 10.0), 0.0, 255.0)),
                          static_cast<std::uint8_t>(gc),
                          static_cast<std::uint8_t>(std::clamp(std::round(gc * 0.35), 0.0, 255.0))};
        }
    }
    return e;
}

}  // namespace antvessel
