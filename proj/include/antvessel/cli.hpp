#pragma once

// Batch front-end: extract, sample, select, segment, evaluate, report,
// synth and tsp-verify subcommands.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iostream>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "antvessel/acs/segment.hpp"
#include "antvessel/acs/tsp.hpp"
#include "antvessel/dataset.hpp"
#include "antvessel/evaluation.hpp"
#include "antvessel/feature_io.hpp"
#include "antvessel/provenance.hpp"
#include "antvessel/report.hpp"
#include "antvessel/sampling.hpp"
#include "antvessel/selection/runner.hpp"
#include "antvessel/synth.hpp"

namespace antvessel::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

/// Flat `key = value` config file; '#' starts a comment.
inline std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

struct Globals {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out = "out";
};

inline void write_json(const fs::path& p, const Json& j) { atomic_write(p, j.dump(2) + "\n"); }

inline Json provenance_json(const Provenance& prov) {
    return Json{{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", prov.config_hash}, {"seed", prov.seed}};
}

inline RasterTags provenance_tags(const Provenance& prov) {
    return {{"Software", std::string(kToolName) + " " + kToolVersion},
            {"ConfigHash", prov.config_hash},
            {"Seed", std::to_string(prov.seed)}};
}

// ---------------------------------------------------------------------------
// Options per subcommand

struct SynthOpts {
    int n_train = 5, n_test = 3, size = 128, vessels = 6;
};
struct WindowOpts {
    int gray = 9, hu = 17;
    std::string hu_input = "raw";
    WindowSpec spec() const {
        WindowSpec w{gray, hu};
        if (hu_input == "inverted") w.hu_input = HuInput::Inverted;
        else if (hu_input != "raw") throw UsageError("hu-input must be 'raw' or 'inverted'");
        w.validate();
        return w;
    }
};
struct ExtractOpts {
    std::string data, split = "test", subset, selection;
    WindowOpts window;
};
struct SampleOpts {
    std::string data, split = "training";
    std::size_t vessel = 1000, nonvessel = 7000;
    WindowOpts window;
};
struct SelectOpts {
    std::string samples, heuristic = "all", merit_form = "standard";
    std::size_t k = 6, relief_m = 0, wrapper_max = 2000;
    int gini_bins = 10;
    bool timing = false;
};
struct AcsOpts {
    acs::AcsParams params;
    double theta = 0.5;
};
struct SegmentOpts {
    std::string data, samples, selection, subset, features, name;
    std::size_t vessel = 1000, nonvessel = 7000;
    WindowOpts window;
    AcsOpts acs;
    bool whole_image = false, score_maps = false;
};
struct EvaluateOpts {
    std::string pred, data, split = "test", name = "run";
    bool whole_image = false;
};
struct ReportOpts {
    std::vector<std::string> runs;
    std::string aggregation = "pooled";
};
struct TspOpts {
    std::string instance;
    int random = 0;
    int ants = 10, iterations = 100;
    double tau0 = 0;
};

// ---------------------------------------------------------------------------
// Commands

struct Context {
    Globals g;
    Provenance prov;
    std::ostream& log;
    fs::path out() const { return fs::path(g.out); }
};

inline int cmd_synth(const Context& ctx, const SynthOpts& o) {
    if (o.n_train < 0 || o.n_test < 0) throw UsageError("image counts must be >= 0");
    const auto tags = provenance_tags(ctx.prov);
    auto make = [&](const std::string& split, int count, std::uint64_t offset) {
        std::string manifest;
        for (int i = 0; i < count; ++i) {
            auto e = synth_retina(derive_seed({ctx.g.seed, offset, static_cast<std::uint64_t>(i)}), o.size, o.size,
                                  o.vessels);
            e.image_id = split + "_" + std::to_string(i + 1);
            save_dataset_entry(ctx.out() / split, e, tags);
            manifest += e.image_id + "\n";
        }
        atomic_write(ctx.out() / split / "manifest.txt", "# " + ctx.prov.line() + "\n" + manifest);
    };
    make("training", o.n_train, 1);
    make("test", o.n_test, 2);
    ctx.log << "synthesized " << o.n_train << " training and " << o.n_test << " test images under " << ctx.g.out
            << "\n";
    return kOk;
}

inline std::vector<FeatureId> subset_from_selection_file(const fs::path& p, std::string* heuristic = nullptr) {
    Json j = Json::parse(read_file(p));
    if (heuristic && j.contains("heuristic")) *heuristic = j.at("heuristic").get<std::string>();
    std::vector<FeatureId> out;
    for (const auto& n : j.at("subset")) {
        auto f = parse_feature(n.get<std::string>());
        if (!f) throw DataError("selection file names unknown feature '" + n.get<std::string>() + "'");
        out.push_back(*f);
    }
    return out;
}

inline int cmd_extract(const Context& ctx, const ExtractOpts& o) {
    const auto w = o.window.spec();
    const auto root = split_root(o.data, o.split);
    std::string label = "all";
    std::vector<FeatureId> subset(kAllFeatures.begin(), kAllFeatures.end());
    if (!o.selection.empty()) subset = subset_from_selection_file(o.selection, &label);
    else if (!o.subset.empty()) {
        subset = parse_feature_list(o.subset);
        label = join_features(subset, "+");
    }
    const auto groups = FeatureGroups::covering(subset);
    Json per_image = Json::array();
    double total = 0;
    for (const auto& id : dataset_ids(root)) {
        auto entry = load_dataset_entry(root, id, false);
        const auto t0 = Clock::now();
        auto m = feature_matrix(entry, w, groups);
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        total += secs;
        atomic_write(ctx.out() / "features" / (id + ".csv"), feature_matrix_csv(m, ctx.prov));
        auto stats = stats_json(m.stats, m.rows.size(), ctx.prov);
        stats["computed_groups"] = Json{{"gray", groups.gray}, {"hu", groups.hu}};
        write_json(ctx.out() / "features" / (id + ".stats.json"), stats);
        per_image.push_back({{"image_id", id}, {"rows", m.rows.size()}, {"seconds", secs}});
        ctx.log << "extract " << id << ": " << m.rows.size() << " FOV pixels in " << format_fixed(secs, 3) << " s\n";
    }
    Json timing = provenance_json(ctx.prov);
    timing["label"] = label;
    timing["subset"] = selection::subset_json(subset);
    timing["total_seconds"] = total;
    timing["images"] = per_image;
    if (const auto* ref = reference::find(label); ref && ref->extraction_seconds) {
        timing["reference_seconds"] = *ref->extraction_seconds;
        ctx.log << "extraction wall-clock " << format_fixed(total, 2) << " s (reference " << *ref->extraction_seconds
                << " s for '" << label << "' on 20 DRIVE images; not comparable across hardware)\n";
    } else {
        ctx.log << "extraction wall-clock " << format_fixed(total, 2) << " s\n";
    }
    write_json(ctx.out() / "timing.json", timing);
    return kOk;
}

inline LabeledSampleSet sample_split(const fs::path& root, const SamplePlan& plan, const WindowSpec& w,
                                     std::vector<DatasetEntry>* entries_out = nullptr) {
    LabeledSampleSet all;
    auto entries = load_dataset(root, true);
    for (const auto& e : entries) all.append(stratified_sample(e, plan, w));
    if (entries_out) *entries_out = std::move(entries);
    return all;
}

inline int cmd_sample(const Context& ctx, const SampleOpts& o) {
    SamplePlan plan{o.vessel, o.nonvessel, ctx.g.seed};
    std::vector<DatasetEntry> entries;
    auto s = sample_split(split_root(o.data, o.split), plan, o.window.spec(), &entries);
    atomic_write(ctx.out() / "samples.csv", samples_csv(s, ctx.prov));
    const auto fs_stats = fov_statistics(entries);
    Json j = provenance_json(ctx.prov);
    j["images"] = entries.size();
    j["samples"] = s.size();
    j["vessel_samples"] = s.count(Label::Vessel);
    j["nonvessel_samples"] = s.count(Label::NonVessel);
    j["fov_vessel_pixels"] = fs_stats.vessel;
    j["fov_nonvessel_pixels"] = fs_stats.nonvessel;
    j["fov_ratio"] = fs_stats.ratio ? Json(*fs_stats.ratio) : Json(nullptr);
    Json sf = Json::array();
    for (const auto& x : s.shortfalls)
        sf.push_back({{"image_id", x.image_id}, {"label", to_label_string(x.label)}, {"requested", x.requested},
                      {"available", x.available}});
    j["shortfalls"] = sf;
    write_json(ctx.out() / "sampling.json", j);
    ctx.log << "sampled " << s.size() << " pixels (" << s.count(Label::Vessel) << " vessel) from " << entries.size()
            << " images; " << s.shortfalls.size() << " stratum shortfalls\n";
    return kOk;
}

inline int cmd_select(const Context& ctx, const SelectOpts& o) {
    const auto samples = read_samples(o.samples);
    selection::SelectionParams p;
    p.k = o.k;
    p.gini_bins = o.gini_bins;
    if (o.relief_m > 0) p.relief_m = o.relief_m;
    p.seed = ctx.g.seed;
    p.wrapper.max_samples = o.wrapper_max;
    if (o.merit_form == "printed") p.merit_form = selection::MeritForm::Printed;
    else if (o.merit_form != "standard") throw UsageError("merit-form must be 'standard' or 'printed'");

    std::vector<selection::Heuristic> which;
    if (o.heuristic == "all") which.assign(selection::kAllHeuristics.begin(), selection::kAllHeuristics.end());
    else which.push_back(selection::parse_heuristic(o.heuristic));

    std::vector<selection::FeatureSubset> subsets;
    for (auto h : which) {
        auto r = selection::run_selection(samples, h, p);
        const auto name = selection::name_of(h);
        write_json(ctx.out() / ("selection_" + name + ".json"), selection::report_json(r, ctx.prov, o.timing));
        atomic_write(ctx.out() / ("scores_" + name + ".csv"), selection::scores_csv(r, ctx.prov));
        ctx.log << name << ": {" << join_features(r.subset.members, ", ") << "} in " << format_fixed(r.wall_seconds, 3)
                << " s\n";
        subsets.push_back(r.subset);
    }
    if (which.size() > 1) {
        auto j = selection::common_features_json(subsets, ctx.prov);
        write_json(ctx.out() / "common_features.json", j);
        ctx.log << "common features: {" << join_features(common_features(subsets), ", ") << "}\n";
    }
    return kOk;
}

inline acs::ClassifierModel model_from(const LabeledSampleSet& train, const std::vector<FeatureId>& subset) {
    return acs::train_model(train, selection::FeatureSubset(subset, "model"));
}

inline int cmd_segment(const Context& ctx, const SegmentOpts& o) {
    const auto w = o.window.spec();
    std::string heuristic = o.name;
    std::vector<FeatureId> subset;
    if (!o.selection.empty()) {
        std::string h;
        subset = subset_from_selection_file(o.selection, &h);
        if (heuristic.empty()) heuristic = h;
    } else if (!o.subset.empty()) {
        subset = parse_feature_list(o.subset);
    } else {
        throw UsageError("segment needs --selection or --subset");
    }
    if (subset.empty()) throw UsageError("empty feature subset");
    if (heuristic.empty()) heuristic = join_features(subset, "+");

    LabeledSampleSet train;
    if (!o.samples.empty()) {
        train = read_samples(o.samples);
    } else {
        SamplePlan plan{o.vessel, o.nonvessel, ctx.g.seed};
        train = sample_split(split_root(o.data, "training"), plan, w);
    }
    const auto model = model_from(train, subset);
    auto params = o.acs.params;
    params.seed = ctx.g.seed;

    const auto test_root = split_root(o.data, "test");
    const auto tags = provenance_tags(ctx.prov);
    std::vector<ImageCounts> counts;
    for (const auto& id : dataset_ids(test_root)) {
        auto entry = load_dataset_entry(test_root, id, false);
        FeatureMatrix m;
        if (!o.features.empty()) m = read_feature_matrix(fs::path(o.features) / (id + ".csv"));
        else m = feature_matrix(entry, w, FeatureGroups::covering(subset));
        auto seg = acs::acs_segment(m, entry.fov, model, params, o.acs.theta);
        write_png(ctx.out() / "masks" / (id + ".png"), mask_to_gray8(seg.mask), tags);
        if (o.score_maps) {
            Gray16 sm(seg.score.width(), seg.score.height());
            for (std::size_t i = 0; i < sm.size(); ++i)
                sm[i] = static_cast<std::uint16_t>(std::lround(std::clamp(seg.score[i], 0.0, 1.0) * 65535.0));
            write_pgm(ctx.out() / "scores" / (id + ".pgm"), sm, tags);
        }
        if (entry.truth) {
            counts.push_back({id, confusion(seg.mask, *entry.truth, entry.fov, !o.whole_image)});
            const auto mt = metrics(counts.back().counts);
            ctx.log << "segment " << id << ": SN " << format_metric(mt.sn) << " SP " << format_metric(mt.sp) << " ACC "
                    << format_metric(mt.acc) << "\n";
        } else {
            ctx.log << "segment " << id << ": no truth mask, metrics skipped\n";
        }
    }
    Json run = provenance_json(ctx.prov);
    run["heuristic"] = heuristic;
    run["subset"] = selection::subset_json(subset);
    run["theta"] = o.acs.theta;
    run["acs"] = {{"n_ants", params.n_ants},   {"n_iterations", params.n_iterations}, {"beta", params.beta},
                  {"q0", params.q0},           {"rho", params.rho},                   {"phi", params.phi},
                  {"tau0", params.tau0},       {"walk_length", params.walk_length}};
    run["fov_only"] = !o.whole_image;
    if (!counts.empty()) {
        atomic_write(ctx.out() / "metrics.csv", metrics_csv(heuristic, counts, ctx.prov));
        std::vector<ConfusionCounts> cs;
        for (const auto& c : counts) cs.push_back(c.counts);
        auto mj = [](const Metrics& m) {
            return Json{{"sn", m.sn ? Json(*m.sn) : Json(nullptr)}, {"sp", m.sp ? Json(*m.sp) : Json(nullptr)},
                        {"acc", m.acc}};
        };
        const auto pooled = pooled_metrics(cs);
        run["pooled"] = mj(pooled);
        run["macro"] = mj(macro_metrics(cs));
        ctx.log << "aggregate (pooled): SN " << format_metric(pooled.sn) << " SP " << format_metric(pooled.sp)
                << " ACC " << format_metric(pooled.acc) << "\n";
    }
    write_json(ctx.out() / "run.json", run);
    return kOk;
}

inline int cmd_evaluate(const Context& ctx, const EvaluateOpts& o) {
    const auto root = split_root(o.data, o.split);
    std::vector<ImageCounts> counts;
    for (const auto& id : dataset_ids(root)) {
        auto entry = load_dataset_entry(root, id, true);
        auto pred_path = find_raster(o.pred, id);
        if (!pred_path) throw DataError("no predicted mask for '" + id + "' in " + o.pred);
        auto pred = binarize(read_gray8(*pred_path));
        counts.push_back({id, confusion(pred, *entry.truth, entry.fov, !o.whole_image)});
    }
    atomic_write(ctx.out() / "metrics.csv", metrics_csv(o.name, counts, ctx.prov));
    std::vector<ConfusionCounts> cs;
    for (const auto& c : counts) cs.push_back(c.counts);
    const auto m = pooled_metrics(cs);
    ctx.log << o.name << " (pooled): SN " << format_metric(m.sn) << " SP " << format_metric(m.sp) << " ACC "
            << format_metric(m.acc) << "\n";
    return kOk;
}

inline std::vector<RunSummary> collect_runs(const std::vector<std::string>& dirs, const std::string& aggregation) {
    if (aggregation != "pooled" && aggregation != "macro") throw UsageError("aggregation must be pooled or macro");
    std::vector<RunSummary> runs;
    for (const auto& d : dirs) {
        const fs::path p = fs::path(d) / "run.json";
        if (!fs::exists(p)) throw DataError("no run.json in " + d);
        Json j = Json::parse(read_file(p));
        if (!j.contains(aggregation)) throw DataError(p.string() + " has no " + aggregation + " metrics");
        const auto& m = j.at(aggregation);
        Metrics mt;
        if (!m.at("sn").is_null()) mt.sn = m.at("sn").get<double>();
        if (!m.at("sp").is_null()) mt.sp = m.at("sp").get<double>();
        mt.acc = m.at("acc").get<double>();
        runs.push_back({j.at("heuristic").get<std::string>(), aggregation, mt});
    }
    if (runs.empty()) throw DataError("no runs found");
    return runs;
}

inline int cmd_report(const Context& ctx, const ReportOpts& o) {
    const auto runs = collect_runs(o.runs, o.aggregation);
    atomic_write(ctx.out() / "comparison.csv", comparison_csv(runs, ctx.prov));
    atomic_write(ctx.out() / "chart.svg", bar_chart_svg(runs, ctx.prov));
    ctx.log << "report over " << runs.size() << " runs written to " << ctx.g.out << "\n";
    return kOk;
}

/// Exhaustive optimum over all tours starting at city 0.
inline double brute_force_tsp(const acs::TspInstance& t) {
    std::vector<std::size_t> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        best = std::min(best, t.tour_length(perm));
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

inline acs::TspInstance random_tsp(int n, std::uint64_t seed) {
    Rng rng(derive_seed({seed, 0x75bULL, static_cast<std::uint64_t>(n)}));
    std::vector<acs::City> cities;
    for (int i = 0; i < n; ++i) cities.push_back({std::to_string(i), uniform01(rng), uniform01(rng)});
    return acs::TspInstance::from_cities(std::move(cities));
}

inline int cmd_tsp(const Context& ctx, const TspOpts& o) {
    acs::TspInstance inst;
    if (!o.instance.empty()) inst = acs::TspInstance::read(o.instance);
    else if (o.random >= 3) inst = random_tsp(o.random, ctx.g.seed);
    else throw UsageError("tsp-verify needs --instance FILE or --random N (N >= 3)");
    auto p = acs::tsp_default_params(inst, ctx.g.seed);
    p.n_ants = o.ants;
    p.n_iterations = o.iterations;
    if (o.tau0 > 0) p.tau0 = o.tau0;
    const auto res = acs::acs_tsp(inst, p);
    Json j = provenance_json(ctx.prov);
    j["cities"] = inst.size();
    j["acs_length"] = res.length;
    Json tour = Json::array();
    for (auto c : res.tour) tour.push_back(inst.cities[c].id);
    j["tour"] = tour;
    bool monotone = std::is_sorted(res.history.rbegin(), res.history.rend());
    j["best_length_non_increasing"] = monotone;
    ctx.log << "ACS tour length " << format_double(res.length);
    if (inst.size() <= 10) {
        const double opt = brute_force_tsp(inst);
        j["optimum"] = opt;
        j["matches_optimum"] = std::abs(res.length - opt) <= 1e-9 * std::max(1.0, opt);
        ctx.log << ", exhaustive optimum " << format_double(opt);
    }
    ctx.log << "\n";
    write_json(ctx.out() / "tsp.json", j);
    return kOk;
}

// ---------------------------------------------------------------------------

inline void add_window(CLI::App* sub, WindowOpts& w) {
    sub->add_option("--gray-window", w.gray, "side of the gray-level window (odd)")->capture_default_str();
    sub->add_option("--hu-window", w.hu, "side of the Hu moment window (odd)")->capture_default_str();
    sub->add_option("--hu-input", w.hu_input, "raw|inverted green for Hu moments")->capture_default_str();
}

inline void add_acs(CLI::App* sub, AcsOpts& a) {
    sub->add_option("--ants", a.params.n_ants)->capture_default_str();
    sub->add_option("--iterations", a.params.n_iterations)->capture_default_str();
    sub->add_option("--beta", a.params.beta)->capture_default_str();
    sub->add_option("--q0", a.params.q0)->capture_default_str();
    sub->add_option("--rho", a.params.rho)->capture_default_str();
    sub->add_option("--phi", a.params.phi)->capture_default_str();
    sub->add_option("--tau0", a.params.tau0)->capture_default_str();
    sub->add_option("--walk-length", a.params.walk_length)->capture_default_str();
    sub->add_option("--theta", a.theta, "score threshold in [0, 1]")->capture_default_str();
}

/// Effective configuration of the selected subcommand, for hashing. Output
/// location and the config path itself do not affect results and are left out.
inline std::map<std::string, std::string> effective_config(const CLI::App& app, const CLI::App& sub) {
    std::map<std::string, std::string> cfg;
    cfg["command"] = sub.get_name();
    auto take = [&](const CLI::App& a) {
        for (const auto* opt : a.get_options()) {
            const auto name = opt->get_single_name();
            if (name.empty() || name == "help" || name == "config" || name == "out") continue;
            std::string v;
            if (opt->count() > 0) {
                for (const auto& r : opt->results()) v += (v.empty() ? "" : " ") + r;
            } else {
                v = opt->get_default_str();
            }
            cfg[name] = v;
        }
    };
    take(app);
    take(sub);
    return cfg;
}

inline int run(std::vector<std::string> args, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Retinal vessel feature selection and ant colony segmentation"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "flat key=value config file; flags override it");
    app.add_option("--seed", g.seed, "global seed")->capture_default_str();
    app.add_option("--out", g.out, "output directory")->capture_default_str();

    SynthOpts so;
    auto* synth = app.add_subcommand("synth", "generate a synthetic training/test dataset");
    synth->add_option("--train", so.n_train)->capture_default_str();
    synth->add_option("--test", so.n_test)->capture_default_str();
    synth->add_option("--size", so.size)->capture_default_str();
    synth->add_option("--vessels", so.vessels)->capture_default_str();

    ExtractOpts eo;
    auto* extract = app.add_subcommand("extract", "compute per-pixel feature CSVs over each FOV");
    extract->add_option("--data", eo.data, "dataset root")->required();
    extract->add_option("--split", eo.split)->capture_default_str();
    extract->add_option("--subset", eo.subset, "restrict computation to these features (comma list)");
    extract->add_option("--selection", eo.selection, "selection JSON whose subset is timed");
    add_window(extract, eo.window);

    SampleOpts sa;
    auto* sample = app.add_subcommand("sample", "stratified training samples with features");
    sample->add_option("--data", sa.data, "dataset root")->required();
    sample->add_option("--split", sa.split)->capture_default_str();
    sample->add_option("--vessel", sa.vessel, "vessel samples per image")->capture_default_str();
    sample->add_option("--nonvessel", sa.nonvessel, "non-vessel samples per image")->capture_default_str();
    add_window(sample, sa.window);

    SelectOpts se;
    auto* select = app.add_subcommand("select", "run feature selection heuristics");
    select->add_option("--samples", se.samples, "sample CSV")->required();
    select->add_option("--heuristic", se.heuristic, "cfs|fisher|gini|relief|sfs|sbs|all")->capture_default_str();
    select->add_option("--k", se.k, "subset size for ranking heuristics")->capture_default_str();
    select->add_option("--gini-bins", se.gini_bins)->capture_default_str();
    select->add_option("--relief-m", se.relief_m, "Relief instances (0: min(2000, n))")->capture_default_str();
    select->add_option("--wrapper-max-samples", se.wrapper_max)->capture_default_str();
    select->add_option("--merit-form", se.merit_form, "standard (k(k-1)) or printed (k(k+1))")->capture_default_str();
    select->add_flag("--timing", se.timing, "include wall-clock seconds in the JSON reports");

    SegmentOpts sg;
    auto* segment = app.add_subcommand("segment", "train on the training split, segment the test split");
    segment->add_option("--data", sg.data, "dataset root with training/ and test/")->required();
    segment->add_option("--samples", sg.samples, "training sample CSV (default: sample the training split)");
    segment->add_option("--selection", sg.selection, "selection JSON providing the feature subset");
    segment->add_option("--subset", sg.subset, "explicit feature subset (comma list)");
    segment->add_option("--features", sg.features, "directory of per-image feature CSVs from extract");
    segment->add_option("--name", sg.name, "run label (default: heuristic of the selection)");
    segment->add_option("--vessel", sg.vessel)->capture_default_str();
    segment->add_option("--nonvessel", sg.nonvessel)->capture_default_str();
    segment->add_flag("--whole-image", sg.whole_image, "count metrics over all pixels instead of the FOV");
    segment->add_flag("--score-maps", sg.score_maps, "also write 16-bit PGM score maps");
    add_window(segment, sg.window);
    add_acs(segment, sg.acs);

    EvaluateOpts ev;
    auto* evaluate = app.add_subcommand("evaluate", "score predicted masks against truth");
    evaluate->add_option("--pred", ev.pred, "directory of predicted masks")->required();
    evaluate->add_option("--data", ev.data, "dataset root")->required();
    evaluate->add_option("--split", ev.split)->capture_default_str();
    evaluate->add_option("--name", ev.name)->capture_default_str();
    evaluate->add_flag("--whole-image", ev.whole_image);

    ReportOpts ro;
    auto* report = app.add_subcommand("report", "merge segment runs into a comparison table and chart");
    report->add_option("--runs", ro.runs, "segment output directories")->required()->expected(1, -1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    report->add_option("--aggregation", ro.aggregation, "pooled|macro")->capture_default_str();

    TspOpts to;
    auto* tsp = app.add_subcommand("tsp-verify", "run ACS on a TSP instance and compare to the exhaustive optimum");
    tsp->add_option("--instance", to.instance, "file of `id x y` lines");
    tsp->add_option("--random", to.random, "random instance with N cities")->capture_default_str();
    tsp->add_option("--ants", to.ants)->capture_default_str();
    tsp->add_option("--iterations", to.iterations)->capture_default_str();
    tsp->add_option("--tau0", to.tau0, "initial pheromone (0: 1/(n L_nn))")->capture_default_str();

    // Config values are injected ahead of the user's flags so the flags win.
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    try {
        if (!config_path.empty()) {
            const auto cfg = parse_config(read_file(config_path));
            auto pos = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
                return app.get_subcommand_no_throw(a) != nullptr;
            });
            if (pos != args.end()) {
                auto* sub = app.get_subcommand(*pos);
                std::vector<std::string> injected;
                for (const auto& [k, v] : cfg) {
                    if (sub->get_option_no_throw("--" + k) || app.get_option_no_throw("--" + k))
                        injected.push_back("--" + k + "=" + v);
                }
                args.insert(pos + 1, injected.begin(), injected.end());
            }
        }
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, log, err);
        return code == 0 ? kOk : kUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    Context ctx{g, Provenance::of(effective_config(app, *chosen), g.seed), log};
    try {
        if (chosen == synth) return cmd_synth(ctx, so);
        if (chosen == extract) return cmd_extract(ctx, eo);
        if (chosen == sample) return cmd_sample(ctx, sa);
        if (chosen == select) return cmd_select(ctx, se);
        if (chosen == segment) return cmd_segment(ctx, sg);
        if (chosen == evaluate) return cmd_evaluate(ctx, ev);
        if (chosen == report) return cmd_report(ctx, ro);
        if (chosen == tsp) return cmd_tsp(ctx, to);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const fs::filesystem_error& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    } catch (const nlohmann::json::exception& e) {
        err << "data error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}

}  // namespace antvessel::cli
