#pragma once

#include <optional>
#include <vector>

#include "antvessel/grid.hpp"

namespace antvessel {

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Percentages. sn / sp are empty when their class is absent.
struct Metrics {
    std::optional<double> sn;
    std::optional<double> sp;
    double acc = 0;
};

/// Vessel is the positive class. Only FOV pixels are counted unless
/// `fov_only` is false, in which case every pixel counts.
inline ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& truth, const BinaryMask& fov,
                                 bool fov_only = true) {
    require_same_shape(pred, truth, "prediction vs truth");
    require_same_shape(pred, fov, "prediction vs FOV");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (fov_only && !fov[i]) continue;
        const bool p = pred[i] != 0, t = truth[i] != 0;
        if (p && t) ++c.tp;
        else if (p) ++c.fp;
        else if (t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

inline Metrics metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw DataError("metrics: no pixels counted (empty FOV)");
    Metrics m;
    if (c.tp + c.fn > 0) m.sn = 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    if (c.tn + c.fp > 0) m.sp = 100.0 * static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    m.acc = 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    return m;
}

/// Pooled metrics over summed counts.
inline Metrics pooled_metrics(const std::vector<ConfusionCounts>& per_image) {
    ConfusionCounts sum;
    for (const auto& c : per_image) sum += c;
    return metrics(sum);
}

/// Mean of per-image metrics; undefined per-image components are left out of
/// their average.
inline Metrics macro_metrics(const std::vector<ConfusionCounts>& per_image) {
    if (per_image.empty()) throw DataError("macro_metrics: no images");
    double sn = 0, sp = 0, acc = 0;
    std::size_t nsn = 0, nsp = 0;
    for (const auto& c : per_image) {
        auto m = metrics(c);
        if (m.sn) {
            sn += *m.sn;
            ++nsn;
        }
        if (m.sp) {
            sp += *m.sp;
            ++nsp;
        }
        acc += m.acc;
    }
    Metrics out;
    if (nsn) out.sn = sn / static_cast<double>(nsn);
    if (nsp) out.sp = sp / static_cast<double>(nsp);
    out.acc = acc / static_cast<double>(per_image.size());
    return out;
}

}  // namespace antvessel
