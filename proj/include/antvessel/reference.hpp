#pragma once

// Published reference results on the DRIVE data: the subset each heuristic
// recommends and the segmentation metrics (SN, SP, ACC in %) obtained with
// it, plus the feature-extraction wall-clock seconds per subset.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "antvessel/feature_id.hpp"

namespace antvessel::reference {

struct Row {
    std::string_view heuristic;
    std::vector<FeatureId> subset;
    double sn, sp, acc;
    std::optional<double> extraction_seconds;
};

inline const std::vector<Row>& drive_rows() {
    using F = FeatureId;
    static const std::vector<Row> rows{
        {"relief", {F::F1, F::F2, F::F3, F::F4, F::F5, F::Hu1}, 75.84, 93.88, 91.55, 90},
        {"cfs", {F::F2, F::F3, F::F4, F::F5, F::Hu1, F::Hu4}, 75.41, 93.81, 91.43, 91},
        {"fisher", {F::F2, F::F3, F::Hu1, F::Hu2, F::Hu3, F::Hu4}, 73.88, 93.49, 90.94, 92},
        {"gini", {F::F2, F::F4, F::F5, F::Hu1, F::Hu4, F::Hu5}, 73.50, 93.36, 90.78, 92},
        {"sfs", {F::Green, F::F2, F::F3, F::F5, F::Hu1}, 74.66, 93.42, 91.01, 89},
        {"sbs", {F::Green, F::F2, F::F5, F::Hu1}, 74.97, 93.40, 91.04, 88},
        {"common", {F::F5, F::Hu1}, 70.78, 92.65, 89.86, std::nullopt},
    };
    return rows;
}

inline const Row* find(std::string_view heuristic) {
    for (const auto& r : drive_rows())
        if (r.heuristic == heuristic) return &r;
    return nullptr;
}

}  // namespace antvessel::reference
