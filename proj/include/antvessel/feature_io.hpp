#pragma once

// CSV serialization of feature matrices and labeled sample sets, plus the JSON
// statistics sidecar.

#include <charconv>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "antvessel/features.hpp"
#include "antvessel/file_util.hpp"
#include "antvessel/provenance.hpp"
#include "antvessel/sampling.hpp"

namespace antvessel {

inline std::string feature_csv_header(bool with_label) {
    std::string h = "image_id,x,y";
    for (auto name : kFeatureNames) {
        h += ',';
        h += name;
    }
    if (with_label) h += ",label";
    return h;
}

namespace detail {

inline void append_row(std::string& out, const std::string& id, int x, int y, const FeatureVector& v) {
    out += id;
    out += ',' + std::to_string(x) + ',' + std::to_string(y);
    for (double d : v) {
        out += ',';
        out += format_double(d);
    }
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto c = line.find(',', start);
        out.push_back(line.substr(start, c == std::string_view::npos ? std::string_view::npos : c - start));
        if (c == std::string_view::npos) break;
        start = c + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view s, std::size_t lineno) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DataError("CSV line " + std::to_string(lineno) + ": bad number '" + std::string(s) + "'");
    return v;
}

struct ParsedRow {
    std::string image_id;
    int x, y;
    FeatureVector values;
    std::optional<Label> label;
};

inline std::vector<ParsedRow> parse_feature_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string_view> header;
    std::string header_line;
    std::vector<ParsedRow> rows;
    std::vector<int> feature_col(kNumFeatures, -1);
    int id_col = -1, x_col = -1, y_col = -1, label_col = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (header.empty()) {
            header_line = line;
            header = split_csv(header_line);
            for (std::size_t i = 0; i < header.size(); ++i) {
                const auto& h = header[i];
                if (h == "image_id") id_col = static_cast<int>(i);
                else if (h == "x") x_col = static_cast<int>(i);
                else if (h == "y") y_col = static_cast<int>(i);
                else if (h == "label") label_col = static_cast<int>(i);
                else if (auto f = parse_feature(h)) feature_col[index_of(*f)] = static_cast<int>(i);
            }
            if (id_col < 0 || x_col < 0 || y_col < 0) throw DataError("feature CSV lacks image_id/x/y columns");
            for (std::size_t f = 0; f < kNumFeatures; ++f)
                if (feature_col[f] < 0)
                    throw DataError("feature CSV lacks column '" + std::string(kFeatureNames[f]) + "'");
            continue;
        }
        auto cells = split_csv(line);
        if (cells.size() != header.size())
            throw DataError("CSV line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                            " cells, got " + std::to_string(cells.size()));
        ParsedRow r;
        r.image_id = std::string(cells[static_cast<std::size_t>(id_col)]);
        r.x = parse_number<int>(cells[static_cast<std::size_t>(x_col)], lineno);
        r.y = parse_number<int>(cells[static_cast<std::size_t>(y_col)], lineno);
        for (std::size_t f = 0; f < kNumFeatures; ++f)
            r.values[f] = parse_number<double>(cells[static_cast<std::size_t>(feature_col[f])], lineno);
        if (label_col >= 0) {
            auto l = cells[static_cast<std::size_t>(label_col)];
            if (l == "vessel" || l == "1") r.label = Label::Vessel;
            else if (l == "nonvessel" || l == "0") r.label = Label::NonVessel;
            else throw DataError("CSV line " + std::to_string(lineno) + ": bad label '" + std::string(l) + "'");
        }
        rows.push_back(std::move(r));
    }
    if (header.empty()) throw DataError("feature CSV has no header");
    return rows;
}

}  // namespace detail

inline std::string to_label_string(Label l) { return l == Label::Vessel ? "vessel" : "nonvessel"; }

inline std::string feature_matrix_csv(const FeatureMatrix& m, const Provenance& prov) {
    std::string out = "# " + prov.line() + "\n" + feature_csv_header(false) + "\n";
    for (const auto& r : m.rows) {
        detail::append_row(out, r.image_id, r.x, r.y, r.values);
        out += '\n';
    }
    return out;
}

inline std::string samples_csv(const LabeledSampleSet& s, const Provenance& prov) {
    std::string out = "# " + prov.line() + "\n" + feature_csv_header(true) + "\n";
    for (const auto& r : s.samples) {
        detail::append_row(out, r.image_id, r.x, r.y, r.features);
        out += ',' + to_label_string(r.label) + '\n';
    }
    return out;
}

inline FeatureMatrix parse_feature_matrix(const std::string& text) {
    FeatureMatrix m;
    for (auto& r : detail::parse_feature_csv(text)) m.rows.push_back({std::move(r.image_id), r.x, r.y, r.values});
    m.refresh_stats();
    return m;
}

inline LabeledSampleSet parse_samples(const std::string& text) {
    LabeledSampleSet s;
    for (auto& r : detail::parse_feature_csv(text)) {
        if (!r.label) throw DataError("sample CSV lacks a label column");
        s.samples.push_back({std::move(r.image_id), r.x, r.y, r.values, *r.label});
    }
    return s;
}

inline FeatureMatrix read_feature_matrix(const fs::path& p) { return parse_feature_matrix(read_file(p)); }
inline LabeledSampleSet read_samples(const fs::path& p) { return parse_samples(read_file(p)); }

inline nlohmann::ordered_json stats_json(const std::optional<FeatureStats>& st, std::size_t rows,
                                         const Provenance& prov) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["config_hash"] = prov.config_hash;
    j["seed"] = prov.seed;
    j["rows"] = rows;
    if (!st) {
        j["stats"] = nullptr;  // undefined for an empty matrix
        return j;
    }
    nlohmann::ordered_json feats = nlohmann::ordered_json::object();
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        const auto& s = (*st)[f];
        feats[std::string(kFeatureNames[f])] = {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
    }
    j["stats"] = feats;
    return j;
}

}  // namespace antvessel
