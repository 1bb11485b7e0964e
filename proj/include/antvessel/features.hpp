#pragma once

// Per-pixel feature vector: green intensity, five windowed gray-level
// statistics and eight log-compressed Hu moment invariants.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "antvessel/dataset.hpp"
#include "antvessel/feature_id.hpp"

namespace antvessel {

/// Intensities the Hu moments are taken over.
enum class HuInput { Raw, Inverted };

struct WindowSpec {
    int gray_window = 9;
    int hu_window = 17;
    /// Inverted uses 255 - v, turning dark vessels into mass.
    HuInput hu_input = HuInput::Raw;

    void validate() const {
        auto ok = [](int s) { return s >= 3 && s % 2 == 1; };
        if (!ok(gray_window) || !ok(hu_window)) {
            throw UsageError("window sides must be odd and >= 3 (gray=" + std::to_string(gray_window) +
                             ", hu=" + std::to_string(hu_window) + ")");
        }
    }
};

/// Inclusive window bounds clipped to the image.
struct WindowBounds {
    int x0, y0, x1, y1;
    int count() const noexcept { return (x1 - x0 + 1) * (y1 - y0 + 1); }
};

inline WindowBounds clipped_window(int width, int height, int x, int y, int side) noexcept {
    int r = side / 2;
    return {std::max(0, x - r), std::max(0, y - r), std::min(width - 1, x + r), std::min(height - 1, y + r)};
}

// ---------------------------------------------------------------------------
// Gray-level group

/// f1 = I - min(S), f2 = max(S) - I, f3 = I - mean(S), f4 = std(S), f5 = I,
/// with S the clipped gray window around (x, y) and I = img(x, y).
/// std is the population standard deviation.
inline std::array<double, 5> gray_level_features(const GrayImage& img, int x, int y, const WindowSpec& w) {
    const auto b = clipped_window(img.width(), img.height(), x, y, w.gray_window);
    const double center = img(x, y);
    double lo = center, hi = center, sum = 0.0;
    for (int yy = b.y0; yy <= b.y1; ++yy)
        for (int xx = b.x0; xx <= b.x1; ++xx) {
            double v = img(xx, yy);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
    const double n = b.count();
    const double mean = sum / n;
    double ss = 0.0;
    for (int yy = b.y0; yy <= b.y1; ++yy)
        for (int xx = b.x0; xx <= b.x1; ++xx) {
            double d = img(xx, yy) - mean;
            ss += d * d;
        }
    return {center - lo, hi - center, center - mean, std::sqrt(ss / n), center};
}

// ---------------------------------------------------------------------------
// Hu moment group

struct HuInvariants {
    std::array<double, 8> values{};
    /// Zero total mass; all values are reported as 0.
    bool degenerate = false;
};

/// Normalized central moments of a window. With N the window pixel count,
/// eta_pq = mu_pq / (mu_00 * N^((p+q)/2)), i.e. the classic
/// mu_pq / mu_00^(1+(p+q)/2) evaluated on the window rescaled to unit mean
/// intensity. This keeps translation and rotation invariance and adds exact
/// invariance to uniform intensity scaling.
struct NormalizedMoments {
    double n20, n11, n02, n30, n21, n12, n03;
};

/// Hu's seven invariants plus the eighth skew-complement invariant.
inline std::array<double, 8> hu_from_moments(const NormalizedMoments& m) {
    const double a = m.n30 + m.n12;
    const double b = m.n21 + m.n03;
    const double c = m.n30 - 3 * m.n12;
    const double d = 3 * m.n21 - m.n03;
    const double e = m.n20 - m.n02;
    std::array<double, 8> h{};
    h[0] = m.n20 + m.n02;
    h[1] = e * e + 4 * m.n11 * m.n11;
    h[2] = c * c + d * d;
    h[3] = a * a + b * b;
    h[4] = c * a * (a * a - 3 * b * b) + d * b * (3 * a * a - b * b);
    h[5] = e * (a * a - b * b) + 4 * m.n11 * a * b;
    h[6] = d * a * (a * a - 3 * b * b) - c * b * (3 * a * a - b * b);
    h[7] = m.n11 * (a * a - b * b) - e * a * b;
    return h;
}

/// Raw (uncompressed) invariants over an arbitrary w x h window given by an
/// accessor at(i, j) with i the column and j the row inside the window.
template <class At>
HuInvariants hu_invariants(int w, int h, At&& at) {
    double m00 = 0, m10 = 0, m01 = 0;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            double v = at(i, j);
            m00 += v;
            m10 += v * i;
            m01 += v * j;
        }
    HuInvariants out;
    if (m00 == 0.0) {
        out.degenerate = true;
        return out;
    }
    const double xc = m10 / m00, yc = m01 / m00;
    double mu20 = 0, mu11 = 0, mu02 = 0, mu30 = 0, mu21 = 0, mu12 = 0, mu03 = 0;
    for (int j = 0; j < h; ++j) {
        const double dy = j - yc;
        for (int i = 0; i < w; ++i) {
            const double v = at(i, j);
            const double dx = i - xc;
            const double vx = v * dx, vy = v * dy;
            mu20 += vx * dx;
            mu11 += vx * dy;
            mu02 += vy * dy;
            mu30 += vx * dx * dx;
            mu21 += vx * dx * dy;
            mu12 += vx * dy * dy;
            mu03 += vy * dy * dy;
        }
    }
    const double n = static_cast<double>(w) * h;
    const double s2 = m00 * n;               // order 2: mu00 * N
    const double s3 = m00 * std::pow(n, 1.5);  // order 3: mu00 * N^1.5
    out.values = hu_from_moments({mu20 / s2, mu11 / s2, mu02 / s2, mu30 / s3, mu21 / s3, mu12 / s3, mu03 / s3});
    return out;
}

inline HuInvariants hu_invariants(const GrayImage& window) {
    return hu_invariants(window.width(), window.height(), [&](int i, int j) { return window(i, j); });
}

/// -sign(h) * log10(|h| + 1e-30)
inline double log_compress(double h) noexcept {
    if (h == 0.0) return 0.0;
    return (h > 0 ? -1.0 : 1.0) * std::log10(std::abs(h) + 1e-30);
}

/// Log-compressed Hu1..Hu8 over the clipped Hu window centered at (x, y).
inline HuInvariants hu_moment_features(const GrayImage& img, int x, int y, const WindowSpec& w) {
    const auto b = clipped_window(img.width(), img.height(), x, y, w.hu_window);
    const bool inv = w.hu_input == HuInput::Inverted;
    auto raw = hu_invariants(b.x1 - b.x0 + 1, b.y1 - b.y0 + 1, [&](int i, int j) {
        const double v = img(b.x0 + i, b.y0 + j);
        return inv ? 255.0 - v : v;
    });
    for (auto& v : raw.values) v = log_compress(v);
    return raw;
}

// ---------------------------------------------------------------------------
// Feature vectors and matrices

/// Which feature groups to evaluate; skipped groups are left at 0.
struct FeatureGroups {
    bool gray = true;
    bool hu = true;

    static FeatureGroups covering(const std::vector<FeatureId>& subset) {
        FeatureGroups g{false, false};
        for (auto f : subset) (is_hu(f) ? g.hu : g.gray) = true;
        return g;
    }
};

inline FeatureVector feature_vector(const GrayImage& green, int x, int y, const WindowSpec& w,
                                    FeatureGroups groups = {}) {
    FeatureVector v{};
    if (groups.gray) {
        v[index_of(FeatureId::Green)] = green(x, y);
        auto g = gray_level_features(green, x, y, w);
        std::copy(g.begin(), g.end(), v.begin() + index_of(FeatureId::F1));
    }
    if (groups.hu) {
        auto hu = hu_moment_features(green, x, y, w);
        std::copy(hu.values.begin(), hu.values.end(), v.begin() + index_of(FeatureId::Hu1));
    }
    return v;
}

struct FeatureRow {
    std::string image_id;
    int x = 0;
    int y = 0;
    FeatureVector values{};
    friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

struct FeatureStat {
    double mean = 0, std = 0, min = 0, max = 0;
};

using FeatureStats = std::array<FeatureStat, kNumFeatures>;

/// Population statistics per feature; empty for an empty row set.
template <class Rows, class Get>
std::optional<FeatureStats> compute_stats(const Rows& rows, Get&& values_of) {
    if (rows.empty()) return std::nullopt;
    FeatureStats st{};
    const double n = static_cast<double>(rows.size());
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        double sum = 0, lo = values_of(rows.front())[f], hi = lo;
        for (const auto& r : rows) {
            double v = values_of(r)[f];
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double mean = sum / n;
        double ss = 0;
        for (const auto& r : rows) {
            double d = values_of(r)[f] - mean;
            ss += d * d;
        }
        st[f] = {mean, std::sqrt(ss / n), lo, hi};
    }
    return st;
}

struct FeatureMatrix {
    std::vector<FeatureRow> rows;
    /// Empty when there are no rows.
    std::optional<FeatureStats> stats;

    void refresh_stats() {
        stats = compute_stats(rows, [](const FeatureRow& r) -> const FeatureVector& { return r.values; });
    }
};

inline FeatureMatrix feature_matrix(const DatasetEntry& entry, std::span<const Pixel> pixels, const WindowSpec& w,
                                    FeatureGroups groups = {}) {
    w.validate();
    require_same_shape(entry.image, entry.fov, entry.image_id);
    const GrayImage green = green_channel(entry.image);
    FeatureMatrix m;
    m.rows.reserve(pixels.size());
    for (const auto& p : pixels) {
        if (!entry.fov.contains(p.x, p.y) || !entry.fov(p.x, p.y)) {
            throw DataError("pixel (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") of '" +
                            entry.image_id + "' is outside the FOV");
        }
        m.rows.push_back({entry.image_id, p.x, p.y, feature_vector(green, p.x, p.y, w, groups)});
    }
    m.refresh_stats();
    return m;
}

/// All FOV pixels in row-major order.
inline FeatureMatrix feature_matrix(const DatasetEntry& entry, const WindowSpec& w, FeatureGroups groups = {}) {
    auto px = set_pixels(entry.fov);
    return feature_matrix(entry, px, w, groups);
}

/// z-score each column with reference statistics; zero-std columns map to 0.
inline FeatureVector normalize(const FeatureVector& v, const FeatureStats& ref) {
    FeatureVector out{};
    for (std::size_t f = 0; f < kNumFeatures; ++f)
        out[f] = ref[f].std > 0 ? (v[f] - ref[f].mean) / ref[f].std : 0.0;
    return out;
}

inline FeatureVector denormalize(const FeatureVector& v, const FeatureStats& ref) {
    FeatureVector out{};
    for (std::size_t f = 0; f < kNumFeatures; ++f)
        out[f] = ref[f].std > 0 ? v[f] * ref[f].std + ref[f].mean : ref[f].mean;
    return out;
}

inline FeatureMatrix normalize(const FeatureMatrix& m, const FeatureStats& ref) {
    FeatureMatrix out;
    out.rows = m.rows;
    for (auto& r : out.rows) r.values = normalize(r.values, ref);
    out.refresh_stats();
    return out;
}

inline FeatureMatrix denormalize(const FeatureMatrix& m, const FeatureStats& ref) {
    FeatureMatrix out;
    out.rows = m.rows;
    for (auto& r : out.rows) r.values = denormalize(r.values, ref);
    out.refresh_stats();
    return out;
}

}  // namespace antvessel
