#pragma once

#include <functional>
#include <random>

#include "antvessel/sampling.hpp"

namespace fixtures {

using antvessel::FeatureVector;
using antvessel::Label;
using antvessel::LabeledSampleSet;

/// n0 non-vessel then n1 vessel samples with features from `gen`.
inline LabeledSampleSet make_set(std::size_t n0, std::size_t n1, std::uint64_t seed,
                                 const std::function<FeatureVector(Label, std::mt19937_64&)>& gen) {
    LabeledSampleSet s;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n0 + n1; ++i) {
        const Label l = i < n0 ? Label::NonVessel : Label::Vessel;
        s.samples.push_back({"fx", static_cast<int>(i), 0, gen(l, rng), l});
    }
    return s;
}

/// Feature `planted` separates the classes (N(0,1) vs N(3,1)); all others are
/// N(0,1) noise unrelated to the class.
inline LabeledSampleSet planted(std::size_t n0, std::size_t n1, std::size_t planted, std::uint64_t seed) {
    return make_set(n0, n1, seed, [&](Label l, std::mt19937_64& rng) {
        std::normal_distribution<double> nd(0, 1);
        FeatureVector v{};
        for (auto& x : v) x = nd(rng);
        if (l == Label::Vessel) v[planted] += 3.0;
        return v;
    });
}

}  // namespace fixtures
