#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "antvessel/selection/cfs.hpp"
#include "antvessel/selection/fisher.hpp"
#include "antvessel/selection/gini.hpp"
#include "antvessel/selection/relief.hpp"
#include "antvessel/selection/runner.hpp"
#include "antvessel/selection/wrapper.hpp"
#include "antvessel/synth.hpp"
#include "selection_fixtures.hpp"

using namespace antvessel;
using namespace antvessel::selection;
using fixtures::make_set;
using fixtures::planted;

namespace {

double direct_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n;
    return cov / std::sqrt(vx * vy);
}

std::vector<double> column(const LabeledSampleSet& s, std::size_t f) {
    std::vector<double> c;
    for (const auto& x : s.samples) c.push_back(x.features[f]);
    return c;
}

std::vector<double> labels_of(const LabeledSampleSet& s) {
    std::vector<double> c;
    for (const auto& x : s.samples) c.push_back(x.label == Label::Vessel ? 1.0 : 0.0);
    return c;
}

LabeledSampleSet permuted(const LabeledSampleSet& s, std::uint64_t seed) {
    auto out = s;
    std::mt19937_64 rng(seed);
    std::shuffle(out.samples.begin(), out.samples.end(), rng);
    return out;
}

LabeledSampleSet affine(const LabeledSampleSet& s, std::size_t f, double a, double b) {
    auto out = s;
    for (auto& x : out.samples) x.features[f] = a * x.features[f] + b;
    return out;
}

std::vector<FeatureId> order_of(const RankedFeatures& r) {
    std::vector<FeatureId> o;
    for (const auto& e : r.entries) o.push_back(e.feature);
    return o;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pearson and CFS

TEST(Pearson, Basics) {
    std::vector<double> x{1, 2, 3}, y{2, 4, 6}, c{5, 5, 5};
    EXPECT_DOUBLE_EQ(pearson(x, y), 1.0);
    EXPECT_DOUBLE_EQ(pearson(x, x), 1.0);
    EXPECT_EQ(pearson(c, x), 0.0);
    std::vector<double> shorter{1, 2};
    EXPECT_THROW(pearson(x, shorter), UsageError);
}

TEST(CfsMerit, Arithmetic) {
    EXPECT_DOUBLE_EQ(cfs_merit(1, 0.6, 0.0), 0.6);
    EXPECT_DOUBLE_EQ(cfs_merit(2, 0.5, 1.0), 2 * 0.5 / std::sqrt(2.0 + 2.0));
    EXPECT_DOUBLE_EQ(cfs_merit(2, 0.5, 1.0, MeritForm::Printed), 2 * 0.5 / std::sqrt(2.0 + 6.0));
}

TEST(CfsMerit, GrowsWithUncorrelatedFeatures) {
    double prev = 0;
    for (int k = 1; k <= 14; ++k) {
        double m = cfs_merit(k, 0.3, 0.0);
        EXPECT_GT(m, prev);
        prev = m;
    }
}

TEST(CfsMerit, RandomSubsetMatchesDirectEvaluation) {
    auto s = planted(60, 40, 3, 11);
    auto st = CorrelationStats::compute(s);
    const auto y = labels_of(s);
    std::vector<FeatureId> sub{FeatureId::F1, FeatureId::F4, FeatureId::Hu2};
    double rcf = 0, rff = 0;
    for (auto f : sub) rcf += std::abs(direct_pearson(column(s, index_of(f)), y)) / 3;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            rff += std::abs(direct_pearson(column(s, index_of(sub[i])), column(s, index_of(sub[j])))) / 3;
    const double expected = 3 * rcf / std::sqrt(3 + 6 * rff);
    EXPECT_NEAR(cfs_merit(sub, st), expected, 1e-12);
}

TEST(CfsSelect, PicksPlantedFeatureAndBeatsSmallSubsets) {
    auto s = planted(80, 80, 5, 3);
    auto st = CorrelationStats::compute(s);
    auto r = cfs_select(s);
    EXPECT_TRUE(r.subset.contains(FeatureId::F5));
    double best_small = 0;
    std::vector<FeatureId> best_set;
    for (std::size_t a = 0; a < kNumFeatures; ++a) {
        for (std::size_t b = a; b < kNumFeatures; ++b)
            for (std::size_t c = b; c < kNumFeatures; ++c) {
                std::vector<FeatureId> sub{feature_at(a)};
                if (b != a) sub.push_back(feature_at(b));
                if (c != b) sub.push_back(feature_at(c));
                double m = cfs_merit(sub, st);
                if (m > best_small) {
                    best_small = m;
                    best_set = sub;
                }
            }
    }
    EXPECT_TRUE(std::find(best_set.begin(), best_set.end(), FeatureId::F5) != best_set.end());
    EXPECT_GE(r.merit, best_small - 1e-12);
}

TEST(CfsSelect, DuplicatedInformativePairKeepsOne) {
    auto s = planted(80, 80, 2, 4);
    for (auto& x : s.samples) x.features[index_of(FeatureId::F3)] = x.features[index_of(FeatureId::F2)];
    auto r = cfs_select(s);
    EXPECT_NE(r.subset.contains(FeatureId::F2), r.subset.contains(FeatureId::F3));
    auto st = CorrelationStats::compute(s);
    // An exact copy has r_ff = 1, so adding it cannot raise the merit.
    EXPECT_LE(cfs_merit({FeatureId::F2, FeatureId::F3}, st), cfs_merit({FeatureId::F2}, st) + 1e-12);
}

TEST(CfsSelect, Errors) {
    auto constant = make_set(5, 5, 1, [](Label, std::mt19937_64&) { return FeatureVector{}; });
    EXPECT_THROW(cfs_select(constant), DataError);
    auto tiny = planted(5, 1, 0, 1);
    EXPECT_THROW(cfs_select(tiny), DataError);
}

// ---------------------------------------------------------------------------
// Fisher

TEST(Fisher, HandComputedFixture) {
    const std::vector<double> c0{0, 0.1, -0.1, 0.05, -0.05}, c1{1, 1.1, 0.9, 1.05, 0.95};
    LabeledSampleSet s;
    for (double v : c0) s.samples.push_back({"f", 0, 0, FeatureVector{v}, Label::NonVessel});
    for (double v : c1) s.samples.push_back({"f", 0, 0, FeatureVector{v}, Label::Vessel});
    // mu0 = 0, mu1 = 1, mu = 0.5: numerator 5*.25 + 5*.25 = 2.5.
    // sigma0^2 = sigma1^2 = (0.01 + 0.01 + 0.0025 + 0.0025) / 5 = 0.005: denominator 0.05.
    auto r = fisher_scores(s);
    EXPECT_NEAR(r.score_of(FeatureId::Green), 50.0, 1e-9);
    EXPECT_EQ(r.score_of(FeatureId::F1), 0.0);  // constant: 0/0 -> 0
    EXPECT_EQ(r.entries.front().feature, FeatureId::Green);
}

TEST(Fisher, EqualMeansScoreZeroAndPerfectSplitUnbounded) {
    LabeledSampleSet s;
    for (int i = 0; i < 4; ++i) {
        FeatureVector v{};
        v[0] = i % 2 ? 1.0 : -1.0;  // same mean in both classes
        v[1] = i < 2 ? 0.0 : 1.0;   // equals the class
        s.samples.push_back({"f", i, 0, v, i < 2 ? Label::NonVessel : Label::Vessel});
    }
    auto r = fisher_scores(s);
    EXPECT_EQ(r.score_of(FeatureId::Green), 0.0);
    EXPECT_EQ(r.score_of(FeatureId::F1), kFisherUnbounded);
    EXPECT_EQ(r.entries.front().feature, FeatureId::F1);
}

TEST(Fisher, DuplicateColumnsScoreIdentically) {
    auto s = planted(30, 30, 4, 2);
    for (auto& x : s.samples) x.features[9] = x.features[4];
    auto r = fisher_scores(s);
    EXPECT_EQ(r.score_of(feature_at(4)), r.score_of(feature_at(9)));
}

TEST(Fisher, SingleClassIsError) {
    auto s = planted(10, 0, 0, 1);
    EXPECT_THROW(fisher_scores(s), DataError);
}

// ---------------------------------------------------------------------------
// Gini

TEST(Gini, ImpurityExamples) {
    EXPECT_EQ(gini_impurity({5, 0}), 0.0);
    EXPECT_DOUBLE_EQ(gini_impurity({3, 3}), 0.5);
}

TEST(Gini, PureAndUniformlyMixedBins) {
    std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
    EXPECT_EQ(gini_index(v, {0, 0, 0, 0, 1, 1, 1, 1}, 2, 2), 0.0);
    EXPECT_DOUBLE_EQ(gini_index(v, {0, 1, 0, 1, 0, 1, 0, 1}, 2, 2), 0.5);
}

TEST(Gini, TwentySampleFourBinFixture) {
    // Sorted-rank labels per bin of 5:
    //   {0,0,0,0,1} -> 0.32, {0,0,1,1,1} -> 0.48, {1,1,1,1,1} -> 0, {0,1,0,1,0} -> 0.48
    // weighted: (0.32 + 0.48 + 0 + 0.48) / 4 = 0.32
    const std::vector<int> by_rank{0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 0};
    std::vector<std::size_t> perm(20);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(5);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> vals;
    std::vector<int> labels;
    for (auto r : perm) {
        vals.push_back(10.0 + 3.0 * static_cast<double>(r));
        labels.push_back(by_rank[r]);
    }
    EXPECT_NEAR(gini_index(vals, labels, 2, 4), 0.32, 1e-12);
}

TEST(Gini, TiesShareABin) {
    std::vector<double> v{1, 1, 1, 1, 2, 3};
    auto b = equal_frequency_bins(v, 3);
    EXPECT_EQ(b[0], b[3]);
    EXPECT_NE(b[4], b[0]);
}

TEST(Gini, LowerIsBetterAndRejectsOneBin) {
    auto s = planted(50, 50, 7, 8);
    auto r = gini_scores(s, 10);
    EXPECT_EQ(r.direction, Direction::LowerBetter);
    EXPECT_EQ(r.entries.front().feature, feature_at(7));
    EXPECT_THROW(gini_scores(s, 1), UsageError);
}

// ---------------------------------------------------------------------------
// Relief

namespace {

FeatureVector relief_oracle(const LabeledSampleSet& s) {
    const std::size_t n = s.size();
    FeatureVector lo{}, hi{};
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        lo[f] = hi[f] = s.samples[0].features[f];
        for (const auto& x : s.samples) {
            lo[f] = std::min(lo[f], x.features[f]);
            hi[f] = std::max(hi[f], x.features[f]);
        }
    }
    auto diff = [&](std::size_t f, std::size_t a, std::size_t b) {
        const double r = hi[f] - lo[f];
        return r > 0 ? std::abs(s.samples[a].features[f] - s.samples[b].features[f]) / r : 0.0;
    };
    auto dist = [&](std::size_t a, std::size_t b) {
        double d = 0;
        for (std::size_t f = 0; f < kNumFeatures; ++f) d += diff(f, a, b) * diff(f, a, b);
        return d;
    };
    FeatureVector w{};
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t hit = n, miss = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            bool same = s.samples[j].label == s.samples[i].label;
            std::size_t& slot = same ? hit : miss;
            if (slot == n || dist(i, j) < dist(i, slot)) slot = j;
        }
        if (hit == n) continue;
        for (std::size_t f = 0; f < kNumFeatures; ++f) w[f] += (diff(f, i, miss) - diff(f, i, hit)) / n;
    }
    return w;
}

}  // namespace

TEST(Relief, SingleUpdateAndSkip) {
    LabeledSampleSet s;
    FeatureVector zero{}, miss{};
    miss[index_of(FeatureId::F1)] = 1.0;
    s.samples.push_back({"r", 0, 0, zero, Label::NonVessel});
    s.samples.push_back({"r", 1, 0, zero, Label::NonVessel});
    s.samples.push_back({"r", 2, 0, miss, Label::Vessel});
    auto r = relief_weights(s, 3, 1);
    // Two instances each add 1/3 to f1; the lone vessel sample has no hit.
    EXPECT_NEAR(r.weights[index_of(FeatureId::F1)], 2.0 / 3.0, 1e-15);
    EXPECT_EQ(r.skipped.size(), 1u);
    EXPECT_EQ(r.skipped[0], 2u);
    for (std::size_t f = 0; f < kNumFeatures; ++f)
        if (f != index_of(FeatureId::F1)) EXPECT_EQ(r.weights[f], 0.0);
}

TEST(Relief, MatchesDirectSimulationWithAllInstances) {
    auto s = planted(40, 30, 0, 21);
    for (auto& x : s.samples) x.features[13] = 7.0;  // constant
    auto r = relief_weights(s, s.size(), 99);
    auto w = relief_oracle(s);
    for (std::size_t f = 0; f < kNumFeatures; ++f) EXPECT_NEAR(r.weights[f], w[f], 1e-12);
    EXPECT_EQ(r.weights[13], 0.0);
    EXPECT_EQ(r.ranking.entries.front().feature, FeatureId::Green);
}

TEST(Relief, LabelFeatureBeatsNoise) {
    auto s = make_set(30, 30, 3, [](Label l, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(0, 1);
        FeatureVector v{};
        v[0] = l == Label::Vessel ? 1.0 : 0.0;
        v[1] = u(rng);
        return v;
    });
    auto r = relief_weights(s, s.size(), 0);
    EXPECT_GT(r.weights[0], r.weights[1]);
}

TEST(Relief, DefaultInstanceCountAndDeterminism) {
    auto s = planted(20, 20, 1, 5);
    auto a = relief_weights(s, 7);
    EXPECT_EQ(a.m, 40u);
    auto b = relief_weights(s, 7);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_THROW(relief_weights(s, 0, 1), UsageError);
}

// ---------------------------------------------------------------------------
// Invariances

TEST(Invariance, PermutationLeavesFilterScoresUnchanged) {
    auto s = planted(60, 40, 6, 17);
    auto p = permuted(s, 3);
    auto f1 = fisher_scores(s), f2 = fisher_scores(p);
    auto g1 = gini_scores(s), g2 = gini_scores(p);
    auto c1 = CorrelationStats::compute(s), c2 = CorrelationStats::compute(p);
    for (auto f : kAllFeatures) {
        EXPECT_NEAR(f1.score_of(f), f2.score_of(f), 1e-12 * std::max(1.0, f1.score_of(f)));
        EXPECT_NEAR(g1.score_of(f), g2.score_of(f), 1e-12);
        EXPECT_NEAR(c1.r_cf[index_of(f)], c2.r_cf[index_of(f)], 1e-12);
    }
    EXPECT_EQ(cfs_select(s).subset.members, cfs_select(p).subset.members);
}

TEST(Invariance, PositiveAffineRescaling) {
    auto s = planted(60, 40, 2, 23);
    auto t = s;
    for (std::size_t f = 0; f < kNumFeatures; ++f) t = affine(t, f, 0.5 + f, -3.0 * f);
    auto f1 = fisher_scores(s), f2 = fisher_scores(t);
    for (auto f : kAllFeatures) EXPECT_NEAR(f1.score_of(f), f2.score_of(f), 1e-9 * std::max(1.0, f1.score_of(f)));
    EXPECT_EQ(order_of(gini_scores(s)), order_of(gini_scores(t)));
    EXPECT_EQ(order_of(relief_weights(s, 3).ranking), order_of(relief_weights(t, 3).ranking));
}

// ---------------------------------------------------------------------------
// Wrapper

TEST(Wrapper, SfsFindsDeterminingFeatureAndMatchesSingleFeatureScan) {
    auto s = make_set(60, 60, 9, [](Label l, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(0, 1);
        FeatureVector v{};
        for (auto& x : v) x = u(rng);
        v[index_of(FeatureId::Hu2)] = (l == Label::Vessel ? 0.6 : 0.0) + 0.4 * u(rng);
        return v;
    });
    auto r = wrapper_select(s, SearchDirection::Forward, 4);
    EXPECT_TRUE(r.subset.contains(FeatureId::Hu2));

    std::vector<int> y;
    for (const auto& x : s.samples) y.push_back(class_index(x.label));
    KnnCrossValidator cv(range_normalized(s), y, 5, 5, 4);
    double best = 1.0;
    FeatureId best_f = FeatureId::Green;
    for (auto f : kAllFeatures) {
        double e = cv.error({f});
        if (e < best) {
            best = e;
            best_f = f;
        }
    }
    ASSERT_GE(r.trace.size(), 2u);
    EXPECT_EQ(r.trace[1].subset, std::vector<FeatureId>{best_f});
    EXPECT_DOUBLE_EQ(r.trace[1].error, best);
    EXPECT_EQ(best, 0.0);
    EXPECT_DOUBLE_EQ(r.trace[0].error, 0.5);  // empty set: majority class
}

TEST(Wrapper, SbsDropsDuplicatedNoise) {
    auto s = make_set(60, 60, 12, [](Label l, std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(0, 1);
        FeatureVector v{};
        v[0] = (l == Label::Vessel ? 0.5 : 0.0) + 0.5 * u(rng);
        v[1] = u(rng);
        v[2] = v[1];
        return v;
    });
    const std::uint64_t seed = 2;
    auto r = wrapper_select(s, SearchDirection::Backward, seed);
    EXPECT_FALSE(r.subset.contains(feature_at(1)) && r.subset.contains(feature_at(2)));

    // Stopping rule: no single removal from the final subset gains epsilon.
    std::vector<int> y;
    for (const auto& x : s.samples) y.push_back(class_index(x.label));
    KnnCrossValidator cv(range_normalized(s), y, 5, 5, seed);
    EXPECT_DOUBLE_EQ(cv.error(r.subset.members), r.error);
    if (r.subset.size() > 1) {
        for (auto f : r.subset.members) {
            std::vector<FeatureId> smaller;
            for (auto g : r.subset.members)
                if (g != f) smaller.push_back(g);
            EXPECT_GT(cv.error(smaller), r.error - WrapperOptions{}.epsilon);
        }
    }
}

TEST(Wrapper, DeterministicAndNeedsEnoughSamples) {
    auto s = planted(40, 40, 3, 6);
    auto a = wrapper_select(s, SearchDirection::Forward, 1);
    auto b = wrapper_select(s, SearchDirection::Forward, 1);
    EXPECT_EQ(a.subset.members, b.subset.members);
    EXPECT_EQ(a.error, b.error);
    EXPECT_THROW(wrapper_select(planted(19, 40, 3, 6), SearchDirection::Forward, 1), DataError);
}

TEST(Wrapper, SubsampleKeepsClassProportions) {
    auto s = planted(700, 100, 3, 6);
    auto sub = stratified_subsample(s, 200, 1);
    EXPECT_EQ(sub.count(Label::NonVessel), 175u);
    EXPECT_EQ(sub.count(Label::Vessel), 25u);
}

// ---------------------------------------------------------------------------
// Ranking plumbing and runner

TEST(Ranking, RankToSubset) {
    auto r = fisher_scores(planted(30, 30, 8, 1));
    EXPECT_EQ(rank_to_subset(r, 14).size(), 14u);
    auto one = rank_to_subset(r, 1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one.members[0], r.entries.front().feature);
    EXPECT_THROW(rank_to_subset(r, 0), UsageError);
    EXPECT_THROW(rank_to_subset(r, 15), UsageError);
}

TEST(Ranking, CommonFeaturesAndJaccard) {
    FeatureSubset a({FeatureId::F2, FeatureId::Hu1, FeatureId::F5}, "a");
    FeatureSubset b({FeatureId::F2, FeatureId::Hu1}, "b");
    auto c = common_features({a, b});
    EXPECT_EQ(c, (std::vector<FeatureId>{FeatureId::F2, FeatureId::Hu1}));
    EXPECT_DOUBLE_EQ(jaccard(a.members, b.members), 2.0 / 3.0);
}

TEST(Runner, AllHeuristicsOnSyntheticSamples) {
    auto e = synth_retina(1, 128, 128, 6);
    auto s = stratified_sample(e, SamplePlan{150, 450, 1});
    SelectionParams p;
    for (auto h : kAllHeuristics) {
        auto r = run_selection(s, h, p);
        EXPECT_FALSE(r.subset.members.empty()) << name_of(h);
        if (h == Heuristic::Relief || h == Heuristic::Fisher || h == Heuristic::Gini) {
            EXPECT_EQ(r.subset.size(), 6u);
        }
        auto j = report_json(r, Provenance::of({}, 0), false);
        EXPECT_FALSE(j.contains("wall_seconds"));
        EXPECT_TRUE(j.contains("reference_subset"));
    }
    EXPECT_THROW(parse_heuristic("bogus"), UsageError);
}
