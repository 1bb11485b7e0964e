#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "antvessel/acs/classifier.hpp"
#include "antvessel/acs/core.hpp"
#include "antvessel/acs/segment.hpp"
#include "antvessel/acs/tsp.hpp"
#include "antvessel/synth.hpp"

using namespace antvessel;
using namespace antvessel::acs;

namespace {

// Fixed pheromone values; records local updates without applying them.
struct FixedPheromone {
    std::vector<double> tau;
    std::vector<double> last_set = std::vector<double>(tau.size(), -1.0);
    double get(std::size_t i) const { return tau[i]; }
    void set(std::size_t i, double v) { last_set[i] = v; }
};

LabeledSampleSet two_feature_fixture() {
    LabeledSampleSet s;
    auto add = [&](double g, double f1, Label l) {
        FeatureVector v{};
        v[index_of(FeatureId::Green)] = g;
        v[index_of(FeatureId::F1)] = f1;
        s.samples.push_back({"m", 0, 0, v, l});
    };
    add(0, 0, Label::NonVessel);
    add(2, 0, Label::NonVessel);
    add(4, 2, Label::Vessel);
    add(6, 2, Label::Vessel);
    return s;
}

selection::FeatureSubset green_f1() { return selection::FeatureSubset({FeatureId::Green, FeatureId::F1}, "t"); }

double brute_force_optimum(const TspInstance& t) {
    std::vector<std::size_t> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double len = 0;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            const auto& a = t.cities[perm[i]];
            const auto& b = t.cities[perm[(i + 1) % perm.size()]];
            len += std::hypot(a.x - b.x, a.y - b.y);
        }
        best = std::min(best, len);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

TspInstance random_cities(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<City> c;
    for (int i = 0; i < n; ++i) c.push_back({std::to_string(i), u(rng), u(rng)});
    return TspInstance::from_cities(c);
}

GrayImage random_eta(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    GrayImage g(w, h);
    for (auto& v : g.data()) v = u(rng) * u(rng);
    return g;
}

BinaryMask disc(int w, int h) {
    BinaryMask m(w, h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            m(x, y) = std::hypot(x - w / 2.0, y - h / 2.0) < 0.45 * std::min(w, h) ? 1 : 0;
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Params and updates

TEST(AcsParams, Validation) {
    AcsParams p;
    EXPECT_NO_THROW(p.validate());
    p.q0 = 1.5;
    EXPECT_THROW(p.validate(), UsageError);
    p = {};
    p.rho = 0;
    EXPECT_THROW(p.validate(), UsageError);
}

TEST(AcsUpdates, LocalMovesTowardTau0AndGlobalIsFloored) {
    AcsParams p;
    EXPECT_LT(std::abs(local_update(0.5, p) - p.tau0), std::abs(0.5 - p.tau0));
    EXPECT_GT(local_update(0.01, p), 0.01);
    EXPECT_DOUBLE_EQ(local_update(p.tau0, p), p.tau0);
    EXPECT_DOUBLE_EQ(global_update(0.1, 1.0, p), 0.9 * 0.1 + 0.1);
    EXPECT_EQ(global_update(0.0, 0.0, p), kTauMin);
}

// ---------------------------------------------------------------------------
// Transition rule

TEST(AcsStep, GreedyWhenQ0IsOne) {
    AcsParams p;
    p.q0 = 1.0;
    FixedPheromone tau{{1, 1, 1, 1}};
    std::vector<double> eta{0.2, 0.9, 0.5, 0.9};
    std::vector<std::size_t> cand{0, 1, 2, 3};
    Rng rng(1);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(acs_step(cand, tau, [&](auto j) { return eta[j]; }, p, rng), 1u);
    EXPECT_DOUBLE_EQ(tau.last_set[1], local_update(1.0, p));
}

TEST(AcsStep, UniformWhenBetaZeroAndQ0Zero) {
    AcsParams p;
    p.q0 = 0;
    p.beta = 0;
    FixedPheromone tau{{1, 1, 1, 1}};
    std::vector<std::size_t> cand{0, 1, 2, 3};
    Rng rng(3);
    std::vector<int> hits(4, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++hits[acs_step(cand, tau, [](auto j) { return 0.1 * (j + 1); }, p, rng)];
    for (int h : hits) EXPECT_NEAR(h / double(n), 0.25, 0.01);
}

TEST(AcsStep, MonteCarloProportionalLaw) {
    AcsParams p;
    p.q0 = 0;
    FixedPheromone tau{{3, 1}};
    std::vector<std::size_t> cand{0, 1};
    Rng rng(7);
    int first = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) first += acs_step(cand, tau, [](auto) { return 1.0; }, p, rng) == 0;
    EXPECT_NEAR(first / double(n), 0.75, 0.01);
}

TEST(AcsStep, AllZeroWeightsFallBackToUniform) {
    AcsParams p;
    FixedPheromone tau{{1, 1, 1}};
    std::vector<std::size_t> cand{0, 1, 2};
    Rng rng(11);
    std::vector<int> hits(3, 0);
    for (int i = 0; i < 30000; ++i) ++hits[acs_step(cand, tau, [](auto) { return 0.0; }, p, rng)];
    for (int h : hits) EXPECT_NEAR(h / 30000.0, 1.0 / 3.0, 0.015);
    std::vector<std::size_t> none;
    EXPECT_THROW(acs_step(none, tau, [](auto) { return 1.0; }, p, rng), UsageError);
}

// ---------------------------------------------------------------------------
// Classifier

TEST(Classifier, HandComputedFit) {
    auto m = train_model(two_feature_fixture(), green_f1());
    EXPECT_DOUBLE_EQ(m.prior[0], 0.5);
    EXPECT_DOUBLE_EQ(m.prior[1], 0.5);
    // Green: mean 3, population std sqrt(5). F1: mean 1, std 1.
    EXPECT_NEAR(m.norm_std[0], std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(m.mean[0][0], -2 / std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(m.mean[1][0], 2 / std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(m.variance[0][0], 0.2, 1e-12);
    EXPECT_NEAR(m.mean[1][1], 1.0, 1e-12);
    EXPECT_EQ(m.variance[0][1], kVarianceFloor);  // constant within class
}

TEST(Classifier, HandEvaluatedPosterior) {
    auto m = train_model(two_feature_fixture(), green_f1());
    FeatureVector mid{};
    mid[index_of(FeatureId::Green)] = 3;
    mid[index_of(FeatureId::F1)] = 1;
    EXPECT_NEAR(m.posterior(mid), 0.5, 1e-12);
    // Green normalized to 1/sqrt5: squared distances 0.2 (vessel) and 1.8,
    // variance 0.2, so the log-likelihood gap is (1.8 - 0.2) / 0.4 = 4.
    FeatureVector q = mid;
    q[index_of(FeatureId::Green)] = 4;
    EXPECT_NEAR(m.posterior(q), 1.0 / (1.0 + std::exp(-4.0)), 1e-12);
}

TEST(Classifier, VesselMeanBeatsDistantBackground) {
    auto m = train_model(two_feature_fixture(), green_f1());
    FeatureVector v{};
    v[index_of(FeatureId::Green)] = 5;
    v[index_of(FeatureId::F1)] = 2;
    EXPECT_GT(m.posterior(v), 0.5);
}

TEST(Classifier, Errors) {
    auto s = two_feature_fixture();
    s.samples.resize(2);
    EXPECT_THROW(train_model(s, green_f1()), DataError);
    EXPECT_THROW(train_model(two_feature_fixture(), selection::FeatureSubset{}), UsageError);
}

// ---------------------------------------------------------------------------
// TSP

TEST(Tsp, UnitSquare) {
    auto t = TspInstance::from_cities({{"a", 0, 0}, {"b", 1, 1}, {"c", 1, 0}, {"d", 0, 1}});
    auto r = acs_tsp(t, tsp_default_params(t, 1));
    EXPECT_NEAR(r.length, 4.0, 1e-12);
}

TEST(Tsp, TriangleIsPerimeter) {
    auto t = TspInstance::from_cities({{"a", 0, 0}, {"b", 3, 0}, {"c", 0, 4}});
    auto r = acs_tsp(t, tsp_default_params(t, 2));
    EXPECT_NEAR(r.length, 12.0, 1e-12);
    EXPECT_THROW(acs_tsp(TspInstance::from_cities({{"a", 0, 0}, {"b", 1, 0}}), AcsParams{}), UsageError);
}

TEST(Tsp, ParseInstance) {
    auto t = TspInstance::parse("# comment\n1 0 0\n2 3 0\n\n3 3 4\n");
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t.cities[2].id, "3");
    EXPECT_DOUBLE_EQ(t.dist[0][2], 5.0);
    EXPECT_THROW(TspInstance::parse("1 0\n"), DataError);
}

TEST(Tsp, EightCitiesMatchBruteForceAndHistoryIsMonotone) {
    int hits = 0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto t = random_cities(8, 1000 + s);
        auto r = acs_tsp(t, tsp_default_params(t, s));
        hits += std::abs(r.length - brute_force_optimum(t)) < 1e-9;
        EXPECT_TRUE(std::is_sorted(r.history.rbegin(), r.history.rend()));
        std::vector<std::size_t> sorted = r.tour;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
    }
    EXPECT_GE(hits, 4);
}

TEST(Tsp, Deterministic) {
    auto t = random_cities(9, 5);
    auto a = acs_tsp(t, tsp_default_params(t, 3));
    auto b = acs_tsp(t, tsp_default_params(t, 3));
    EXPECT_EQ(a.tour, b.tour);
    EXPECT_EQ(a.history, b.history);
}

// ---------------------------------------------------------------------------
// Segmentation

TEST(Segment, ZeroEtaGivesEmptyMask) {
    auto fov = disc(40, 40);
    auto r = acs_segment(GrayImage(40, 40, 0.0), fov, AcsParams{}, 0.1);
    EXPECT_EQ(count_set(r.mask), 0u);
}

TEST(Segment, ThetaZeroMarksWholeFov) {
    auto fov = disc(40, 40);
    auto r = acs_segment(random_eta(40, 40, 1), fov, AcsParams{}, 0.0);
    EXPECT_EQ(r.mask, fov);
}

TEST(Segment, NoIterationsReducesToBayesThreshold) {
    auto fov = disc(50, 40);
    auto eta = random_eta(50, 40, 2);
    AcsParams p;
    p.n_iterations = 0;
    double mx = 0;
    for (std::size_t i = 0; i < eta.size(); ++i)
        if (fov[i]) mx = std::max(mx, eta[i]);
    for (double th : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        auto r = acs_segment(eta, fov, p, th);
        for (std::size_t i = 0; i < eta.size(); ++i) {
            const bool expect = fov[i] && eta[i] / mx >= th;
            ASSERT_EQ(r.mask[i] != 0, expect) << i << " at " << th;
        }
    }
}

TEST(Segment, ThresholdMonotoneAndPheromoneBounded) {
    auto fov = disc(48, 48);
    auto eta = random_eta(48, 48, 3);
    AcsParams p;
    p.n_ants = 16;
    p.n_iterations = 10;
    p.seed = 4;
    BinaryMask prev = fov;
    for (double th : {0.0, 0.1, 0.3, 0.5, 0.7, 1.0}) {
        auto r = acs_segment(eta, fov, p, th);
        for (std::size_t i = 0; i < fov.size(); ++i) {
            if (r.mask[i]) ASSERT_TRUE(prev[i]);
            if (fov[i]) {
                // Deposits are mean posteriors, so at most 1.
                ASSERT_GE(r.pheromone[i], kTauMin);
                ASSERT_LE(r.pheromone[i], std::max(p.tau0, 1.0));
                ASSERT_GE(r.score[i], 0.0);
                ASSERT_LE(r.score[i], 1.0);
            }
        }
        prev = r.mask;
    }
}

TEST(Segment, DeterministicPerSeed) {
    auto fov = disc(40, 40);
    auto eta = random_eta(40, 40, 5);
    AcsParams p;
    p.n_ants = 8;
    p.n_iterations = 5;
    p.seed = 9;
    auto a = acs_segment(eta, fov, p, 0.5), b = acs_segment(eta, fov, p, 0.5);
    EXPECT_EQ(a.mask, b.mask);
    EXPECT_EQ(a.pheromone.data(), b.pheromone.data());
}

TEST(Segment, Errors) {
    auto eta = random_eta(20, 20, 1);
    EXPECT_THROW(acs_segment(eta, BinaryMask(20, 20, 0), AcsParams{}, 0.5), DataError);
    EXPECT_THROW(acs_segment(eta, disc(20, 20), AcsParams{}, 1.5), UsageError);
    EXPECT_THROW(acs_segment(eta, disc(21, 20), AcsParams{}, 0.5), DataError);
}

TEST(Segment, SyntheticRetinaRegressionBaseline) {
    auto train = synth_retina(11, 128, 128, 6);
    auto test = synth_retina(1, 128, 128, 6);
    auto samples = stratified_sample(train, SamplePlan{1000, 7000, 1});
    selection::FeatureSubset sub({FeatureId::F1, FeatureId::F2, FeatureId::F3, FeatureId::F4, FeatureId::F5,
                                  FeatureId::Hu1},
                                 "t");
    auto model = train_model(samples, sub);
    auto m = feature_matrix(test, {}, FeatureGroups::covering(sub.members));
    auto r = acs_segment(m, test.fov, model, AcsParams{}, 0.5);
    std::size_t correct = 0, total = 0;
    for (std::size_t i = 0; i < test.fov.size(); ++i) {
        if (!test.fov[i]) continue;
        ++total;
        correct += (r.mask[i] != 0) == ((*test.truth)[i] != 0);
    }
    EXPECT_GE(static_cast<double>(correct) / total, 0.90);
}

TEST(Segment, MatrixMustCoverFov) {
    auto e = synth_retina(1, 64, 64, 3);
    auto model = train_model(two_feature_fixture(), green_f1());
    std::vector<Pixel> some{set_pixels(e.fov)[0]};
    auto partial = feature_matrix(e, some, {});
    EXPECT_THROW(acs_segment(partial, e.fov, model, AcsParams{}, 0.5), DataError);
}
