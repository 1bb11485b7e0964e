#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "antvessel/features.hpp"
#include "antvessel/rng.hpp"

namespace antvessel {

enum class Label : int { NonVessel = 0, Vessel = 1 };

inline constexpr int class_index(Label l) noexcept { return static_cast<int>(l); }

struct LabeledSample {
    std::string image_id;
    int x = 0;
    int y = 0;
    FeatureVector features{};
    Label label = Label::NonVessel;
    friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

/// A stratum that held fewer pixels than requested.
struct Shortfall {
    std::string image_id;
    Label label = Label::Vessel;
    std::size_t requested = 0;
    std::size_t available = 0;
};

struct LabeledSampleSet {
    std::vector<LabeledSample> samples;
    std::vector<Shortfall> shortfalls;

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }

    void append(const LabeledSampleSet& other) {
        samples.insert(samples.end(), other.samples.begin(), other.samples.end());
        shortfalls.insert(shortfalls.end(), other.shortfalls.begin(), other.shortfalls.end());
    }

    std::size_t count(Label l) const {
        return static_cast<std::size_t>(
            std::count_if(samples.begin(), samples.end(), [l](const auto& s) { return s.label == l; }));
    }
};

struct SamplePlan {
    std::size_t n_vessel_per_image = 1000;
    std::size_t n_nonvessel_per_image = 7000;
    std::uint64_t seed = 0;

    void validate() const {
        if (n_vessel_per_image == 0 || n_nonvessel_per_image == 0)
            throw UsageError("sample plan counts must be positive");
    }
};

/// Uniform sampling without replacement inside each (image, class) stratum
/// of FOV pixels. The random stream depends only on (seed, image_id), so
/// images can be processed in any order. Selected pixels come back in
/// row-major order, vessel stratum first.
inline LabeledSampleSet stratified_sample(const DatasetEntry& entry, const SamplePlan& plan,
                                          const WindowSpec& window = {}) {
    plan.validate();
    if (!entry.truth) throw DataError("entry '" + entry.image_id + "' has no truth mask");
    require_same_shape(entry.fov, *entry.truth, entry.image_id);
    if (count_set(entry.fov) == 0) throw DataError("entry '" + entry.image_id + "' has an empty FOV");

    std::vector<Pixel> strata[2];
    for (const auto& p : set_pixels(entry.fov)) strata[(*entry.truth)(p.x, p.y) ? 1 : 0].push_back(p);

    LabeledSampleSet out;
    std::vector<Pixel> chosen_all;
    std::vector<Label> labels;
    Rng rng(derive_seed(plan.seed, entry.image_id));
    for (Label label : {Label::Vessel, Label::NonVessel}) {
        auto& pool = strata[class_index(label)];
        const std::size_t want =
            label == Label::Vessel ? plan.n_vessel_per_image : plan.n_nonvessel_per_image;
        const std::size_t take = std::min(want, pool.size());
        if (take < want) out.shortfalls.push_back({entry.image_id, label, want, pool.size()});
        // Partial Fisher-Yates over the stratum.
        for (std::size_t i = 0; i < take; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        std::vector<Pixel> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
        std::sort(chosen.begin(), chosen.end(), [](const Pixel& a, const Pixel& b) {
            return a.y != b.y ? a.y < b.y : a.x < b.x;
        });
        for (const auto& p : chosen) {
            chosen_all.push_back(p);
            labels.push_back(label);
        }
    }
    auto fm = feature_matrix(entry, chosen_all, window);
    out.samples.reserve(fm.rows.size());
    for (std::size_t i = 0; i < fm.rows.size(); ++i) {
        const auto& r = fm.rows[i];
        out.samples.push_back({r.image_id, r.x, r.y, r.values, labels[i]});
    }
    return out;
}

}  // namespace antvessel
