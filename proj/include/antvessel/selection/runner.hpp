#pragma once

// Runs one heuristic by name and renders its report.

#include <chrono>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "antvessel/provenance.hpp"
#include "antvessel/reference.hpp"
#include "antvessel/selection/cfs.hpp"
#include "antvessel/selection/fisher.hpp"
#include "antvessel/selection/gini.hpp"
#include "antvessel/selection/relief.hpp"
#include "antvessel/selection/wrapper.hpp"

namespace antvessel::selection {

enum class Heuristic { Cfs, Fisher, Gini, Relief, Sfs, Sbs };

inline constexpr std::array<Heuristic, 6> kAllHeuristics{Heuristic::Relief, Heuristic::Cfs, Heuristic::Fisher,
                                                         Heuristic::Gini,   Heuristic::Sfs, Heuristic::Sbs};

inline std::string name_of(Heuristic h) {
    switch (h) {
        case Heuristic::Cfs: return "cfs";
        case Heuristic::Fisher: return "fisher";
        case Heuristic::Gini: return "gini";
        case Heuristic::Relief: return "relief";
        case Heuristic::Sfs: return "sfs";
        case Heuristic::Sbs: return "sbs";
    }
    return "?";
}

inline Heuristic parse_heuristic(const std::string& s) {
    for (auto h : kAllHeuristics)
        if (name_of(h) == s) return h;
    throw UsageError("unknown heuristic '" + s + "' (expected cfs, fisher, gini, relief, sfs, sbs or all)");
}

struct SelectionParams {
    std::size_t k = 6;
    int gini_bins = 10;
    std::optional<std::size_t> relief_m;  // default min(2000, n)
    std::uint64_t seed = 0;
    WrapperOptions wrapper;
    MeritForm merit_form = MeritForm::Standard;
};

struct SelectionReport {
    Heuristic heuristic;
    std::optional<RankedFeatures> ranking;
    FeatureSubset subset;
    nlohmann::ordered_json parameters;
    nlohmann::ordered_json details;
    double wall_seconds = 0;
};

inline SelectionReport run_selection(const LabeledSampleSet& samples, Heuristic h, const SelectionParams& p) {
    const auto t0 = std::chrono::steady_clock::now();
    SelectionReport r{h, std::nullopt, {}, nlohmann::ordered_json::object(), nlohmann::ordered_json::object(), 0};
    r.parameters["seed"] = p.seed;
    switch (h) {
        case Heuristic::Fisher:
            r.ranking = fisher_scores(samples);
            r.parameters["k"] = p.k;
            r.subset = rank_to_subset(*r.ranking, p.k, "fisher");
            break;
        case Heuristic::Gini:
            r.ranking = gini_scores(samples, p.gini_bins);
            r.parameters["k"] = p.k;
            r.parameters["bins"] = p.gini_bins;
            r.subset = rank_to_subset(*r.ranking, p.k, "gini");
            break;
        case Heuristic::Relief: {
            const auto m = p.relief_m.value_or(std::min(kDefaultReliefInstances, samples.size()));
            auto res = relief_weights(samples, m, p.seed);
            r.ranking = res.ranking;
            r.parameters["k"] = p.k;
            r.parameters["m"] = res.m;
            r.details["skipped_instances"] = res.skipped.size();
            r.subset = rank_to_subset(*r.ranking, p.k, "relief");
            break;
        }
        case Heuristic::Cfs: {
            CfsOptions opt;
            opt.form = p.merit_form;
            auto res = cfs_select(samples, opt);
            r.parameters["merit_form"] = p.merit_form == MeritForm::Standard ? "k(k-1)" : "k(k+1)";
            r.parameters["max_stale_expansions"] = opt.max_stale_expansions;
            const auto st = CorrelationStats::compute(samples);
            FeatureVector rcf{};
            std::copy(st.r_cf.begin(), st.r_cf.end(), rcf.begin());
            r.ranking = RankedFeatures::from_scores(rcf, Direction::HigherBetter);
            r.subset = res.subset;
            r.details["merit"] = res.merit;
            r.details["subsets_evaluated"] = res.subsets_evaluated;
            break;
        }
        case Heuristic::Sfs:
        case Heuristic::Sbs: {
            auto res = wrapper_select(samples, h == Heuristic::Sfs ? SearchDirection::Forward : SearchDirection::Backward,
                                      p.seed, p.wrapper);
            r.parameters["folds"] = p.wrapper.folds;
            r.parameters["neighbors"] = p.wrapper.neighbors;
            r.parameters["epsilon"] = p.wrapper.epsilon;
            r.parameters["max_samples"] = p.wrapper.max_samples;
            r.subset = res.subset;
            r.details["cv_error"] = res.error;
            r.details["samples_used"] = res.samples_used;
            auto trace = nlohmann::ordered_json::array();
            for (const auto& s : res.trace) {
                auto names = nlohmann::ordered_json::array();
                for (auto f : s.subset) names.push_back(std::string(antvessel::name_of(f)));
                trace.push_back({{"subset", names}, {"cv_error", s.error}});
            }
            r.details["trace"] = trace;
            break;
        }
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline nlohmann::ordered_json subset_json(const std::vector<FeatureId>& fs) {
    auto a = nlohmann::ordered_json::array();
    for (auto f : fs) a.push_back(std::string(antvessel::name_of(f)));
    return a;
}

/// `include_timing` is off when byte-reproducible output is wanted.
inline nlohmann::ordered_json report_json(const SelectionReport& r, const Provenance& prov, bool include_timing) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["config_hash"] = prov.config_hash;
    j["seed"] = prov.seed;
    j["heuristic"] = name_of(r.heuristic);
    j["parameters"] = r.parameters;
    if (r.ranking) {
        j["direction"] = to_string(r.ranking->direction);
        auto scores = nlohmann::ordered_json::array();
        for (const auto& e : r.ranking->entries)
            scores.push_back({{"feature", std::string(antvessel::name_of(e.feature))}, {"score", e.score}});
        j["ranked_scores"] = scores;
    } else {
        j["ranked_scores"] = nullptr;
    }
    j["subset"] = subset_json(r.subset.members);
    j["details"] = r.details;
    if (include_timing) j["wall_seconds"] = r.wall_seconds;
    if (const auto* ref = reference::find(name_of(r.heuristic))) {
        j["reference_subset"] = subset_json(ref->subset);
        j["reference_jaccard"] = jaccard(r.subset.members, ref->subset);
    }
    return j;
}

inline std::string scores_csv(const SelectionReport& r, const Provenance& prov) {
    std::string out = "# " + prov.line() + "\n";
    if (r.ranking) {
        out += "rank,feature,score,selected\n";
        for (std::size_t i = 0; i < r.ranking->entries.size(); ++i) {
            const auto& e = r.ranking->entries[i];
            out += std::to_string(i + 1) + "," + std::string(antvessel::name_of(e.feature)) + "," +
                   format_double(e.score) + "," + (r.subset.contains(e.feature) ? "1" : "0") + "\n";
        }
    } else {
        out += "step,subset,cv_error\n";
        std::size_t step = 0;
        for (const auto& s : r.details.at("trace")) {
            std::vector<std::string> names = s.at("subset").get<std::vector<std::string>>();
            std::string joined;
            for (std::size_t i = 0; i < names.size(); ++i) joined += (i ? " " : "") + names[i];
            out += std::to_string(step++) + "," + joined + "," + format_double(s.at("cv_error").get<double>()) + "\n";
        }
    }
    return out;
}

/// Cross-heuristic common-feature summary. The reference results are
/// inconsistent about the shared pair ({f2, hu1} vs {f5, hu1}), so the
/// summary flags which of the candidates the computed intersection holds.
inline nlohmann::ordered_json common_features_json(const std::vector<FeatureSubset>& subsets, const Provenance& prov) {
    const auto common = common_features(subsets);
    auto has = [&](FeatureId f) { return std::find(common.begin(), common.end(), f) != common.end(); };
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["config_hash"] = prov.config_hash;
    j["seed"] = prov.seed;
    auto per = nlohmann::ordered_json::object();
    for (const auto& s : subsets) per[s.provenance] = subset_json(s.members);
    j["subsets"] = per;
    j["common"] = subset_json(common);
    j["contains_hu1"] = has(FeatureId::Hu1);
    j["contains_f2"] = has(FeatureId::F2);
    j["contains_f5"] = has(FeatureId::F5);
    j["reference_pair_discrepancy"] =
        "reference text names {f2, hu1} as common to all subsets; reference metrics row uses {f5, hu1}";
    return j;
}

}  // namespace antvessel::selection
