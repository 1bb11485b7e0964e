#pragma once

// Metrics tables and the grouped SN/SP/ACC bar chart.

#include <sstream>
#include <string>
#include <vector>

#include "antvessel/evaluation.hpp"
#include "antvessel/provenance.hpp"
#include "antvessel/reference.hpp"

namespace antvessel {

inline std::string format_metric(const std::optional<double>& v) { return v ? format_fixed(*v, 4) : "NA"; }

struct ImageCounts {
    std::string image_id;
    ConfusionCounts counts;
};

/// Per-image rows followed by `pooled` and `macro` aggregate rows.
inline std::string metrics_csv(const std::string& heuristic, const std::vector<ImageCounts>& images,
                               const Provenance& prov) {
    std::string out = "# " + prov.line() + "\nheuristic,image_id,tp,fp,tn,fn,sn,sp,acc\n";
    std::vector<ConfusionCounts> all;
    for (const auto& im : images) {
        const auto m = metrics(im.counts);
        out += heuristic + "," + im.image_id + "," + std::to_string(im.counts.tp) + "," + std::to_string(im.counts.fp) +
               "," + std::to_string(im.counts.tn) + "," + std::to_string(im.counts.fn) + "," + format_metric(m.sn) +
               "," + format_metric(m.sp) + "," + format_metric(m.acc) + "\n";
        all.push_back(im.counts);
    }
    ConfusionCounts sum;
    for (const auto& c : all) sum += c;
    const auto pooled = pooled_metrics(all);
    const auto macro = macro_metrics(all);
    out += heuristic + ",pooled," + std::to_string(sum.tp) + "," + std::to_string(sum.fp) + "," +
           std::to_string(sum.tn) + "," + std::to_string(sum.fn) + "," + format_metric(pooled.sn) + "," +
           format_metric(pooled.sp) + "," + format_metric(pooled.acc) + "\n";
    out += heuristic + ",macro,,,,," + format_metric(macro.sn) + "," + format_metric(macro.sp) + "," +
           format_metric(macro.acc) + "\n";
    return out;
}

/// One heuristic's aggregate metrics, as collected by the report command.
struct RunSummary {
    std::string heuristic;
    std::string aggregation;  // "pooled" or "macro"
    Metrics metrics;
};

inline std::string comparison_csv(const std::vector<RunSummary>& runs, const Provenance& prov) {
    std::string out = "# " + prov.line() +
                      "\nheuristic,aggregation,sn,sp,acc,ref_sn,ref_sp,ref_acc,delta_sn,delta_sp,delta_acc\n";
    for (const auto& r : runs) {
        out += r.heuristic + "," + r.aggregation + "," + format_metric(r.metrics.sn) + "," +
               format_metric(r.metrics.sp) + "," + format_metric(r.metrics.acc);
        if (const auto* ref = reference::find(r.heuristic)) {
            auto delta = [](const std::optional<double>& v, double refv) {
                return v ? format_fixed(*v - refv, 4) : std::string("NA");
            };
            out += "," + format_fixed(ref->sn) + "," + format_fixed(ref->sp) + "," + format_fixed(ref->acc) + "," +
                   delta(r.metrics.sn, ref->sn) + "," + delta(r.metrics.sp, ref->sp) + "," +
                   delta(std::optional<double>(r.metrics.acc), ref->acc);
        } else {
            out += ",NA,NA,NA,NA,NA,NA";
        }
        out += "\n";
    }
    return out;
}

/// Grouped bar chart, one group per run with SN, SP and ACC bars. Bar height
/// is value * kChartPxPerPercent; each bar carries data-* attributes with
/// its heuristic, metric and value.
inline constexpr double kChartPxPerPercent = 3.0;

inline std::string bar_chart_svg(const std::vector<RunSummary>& runs, const Provenance& prov) {
    constexpr double bar_w = 18, gap = 24, left = 50, top = 20, plot_h = 100 * kChartPxPerPercent;
    const double group_w = 3 * bar_w + gap;
    const double width = left + group_w * static_cast<double>(runs.size()) + gap;
    const double height = top + plot_h + 60;
    static const char* colors[3] = {"#4e79a7", "#f28e2b", "#59a14f"};
    static const char* names[3] = {"sn", "sp", "acc"};
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s << "<!-- " << prov.line() << " -->\n";
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_fixed(width, 1) << "\" height=\""
      << format_fixed(height, 1) << "\">\n";
    s << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 100; t += 20) {
        const double y = top + plot_h - t * kChartPxPerPercent;
        s << "  <text x=\"" << left - 6 << "\" y=\"" << format_fixed(y + 4, 1)
          << "\" font-size=\"10\" text-anchor=\"end\">" << t << "</text>\n";
    }
    for (std::size_t g = 0; g < runs.size(); ++g) {
        const auto& r = runs[g];
        const double values[3] = {r.metrics.sn.value_or(0), r.metrics.sp.value_or(0), r.metrics.acc};
        const double x0 = left + gap / 2 + group_w * static_cast<double>(g);
        for (int b = 0; b < 3; ++b) {
            const double h = values[b] * kChartPxPerPercent;
            s << "  <rect class=\"bar\" data-heuristic=\"" << r.heuristic << "\" data-metric=\"" << names[b]
              << "\" data-value=\"" << format_fixed(values[b], 2) << "\" x=\"" << format_fixed(x0 + b * bar_w, 1)
              << "\" y=\"" << format_fixed(top + plot_h - h, 2) << "\" width=\"" << bar_w << "\" height=\""
              << format_fixed(h, 2) << "\" fill=\"" << colors[b] << "\"/>\n";
        }
        s << "  <text x=\"" << format_fixed(x0 + 1.5 * bar_w, 1) << "\" y=\"" << top + plot_h + 16
          << "\" font-size=\"11\" text-anchor=\"middle\">" << r.heuristic << "</text>\n";
    }
    const double ly = top + plot_h + 38;
    for (int b = 0; b < 3; ++b) {
        s << "  <rect x=\"" << left + b * 70 << "\" y=\"" << ly << "\" width=\"10\" height=\"10\" fill=\"" << colors[b]
          << "\"/><text x=\"" << left + b * 70 + 14 << "\" y=\"" << ly + 9 << "\" font-size=\"10\">"
          << (b == 0 ? "SN" : b == 1 ? "SP" : "ACC") << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace antvessel
