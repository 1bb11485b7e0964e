#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "antvessel/raster_io.hpp"

namespace antvessel {

inline constexpr std::uint8_t kMaskThreshold = 128;

struct DatasetEntry {
    std::string image_id;
    RgbImage image;
    BinaryMask fov;
    std::optional<BinaryMask> truth;

    int width() const noexcept { return image.width(); }
    int height() const noexcept { return image.height(); }
};

inline BinaryMask binarize(const Gray8& raster, std::uint8_t threshold = kMaskThreshold) {
    BinaryMask m(raster.width(), raster.height());
    for (std::size_t i = 0; i < raster.size(); ++i) m[i] = raster[i] >= threshold ? 1 : 0;
    return m;
}

inline Gray8 mask_to_gray8(const BinaryMask& m) {
    Gray8 g(m.width(), m.height());
    for (std::size_t i = 0; i < m.size(); ++i) g[i] = m[i] ? 255 : 0;
    return g;
}

inline DatasetEntry load_entry(const fs::path& image_path, const fs::path& fov_path,
                               const std::optional<fs::path>& truth_path = std::nullopt) {
    DatasetEntry e;
    e.image_id = image_path.stem().string();
    e.image = read_rgb(image_path);
    e.fov = binarize(read_gray8(fov_path));
    require_same_shape(e.image, e.fov, "image vs FOV mask " + fov_path.string());
    if (truth_path) {
        e.truth = binarize(read_gray8(*truth_path));
        require_same_shape(e.image, *e.truth, "image vs truth mask " + truth_path->string());
    }
    return e;
}

inline GrayImage green_channel(const RgbImage& img) {
    GrayImage g(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) g[i] = img[i].g;
    return g;
}

struct FovStatistics {
    std::size_t vessel = 0;
    std::size_t nonvessel = 0;
    /// nonvessel / vessel; empty when there are no vessel pixels.
    std::optional<double> ratio;
};

inline FovStatistics fov_statistics(const std::vector<DatasetEntry>& entries) {
    FovStatistics s;
    for (const auto& e : entries) {
        if (!e.truth) throw DataError("entry '" + e.image_id + "' has no truth mask");
        require_same_shape(e.fov, *e.truth, e.image_id);
        for (std::size_t i = 0; i < e.fov.size(); ++i) {
            if (!e.fov[i]) continue;
            if ((*e.truth)[i]) ++s.vessel;
            else ++s.nonvessel;
        }
    }
    if (s.vessel > 0) s.ratio = static_cast<double>(s.nonvessel) / static_cast<double>(s.vessel);
    return s;
}

// ---------------------------------------------------------------------------
// On-disk layout: <root>/images/<id>.<ext>, <root>/fov/<id>.<ext>,
// <root>/truth/<id>.<ext>, optional <root>/manifest.txt with one id per line.
// A root holding training/ and test/ subdirectories is addressed per split.

inline const std::vector<std::string>& raster_extensions() {
    static const std::vector<std::string> exts{".png", ".ppm", ".pgm"};
    return exts;
}

inline std::optional<fs::path> find_raster(const fs::path& dir, const std::string& id) {
    for (const auto& ext : raster_extensions()) {
        fs::path p = dir / (id + ext);
        if (fs::exists(p)) return p;
    }
    return std::nullopt;
}

inline fs::path split_root(const fs::path& root, const std::string& split) {
    if (!fs::exists(root)) throw DataError("dataset root does not exist: " + root.string());
    if (!split.empty() && fs::is_directory(root / split)) return root / split;
    if (fs::is_directory(root / "images")) return root;
    throw DataError("no '" + split + "' split or images/ directory under " + root.string());
}

inline std::vector<std::string> dataset_ids(const fs::path& root) {
    std::vector<std::string> ids;
    if (fs::exists(root / "manifest.txt")) {
        std::istringstream in(read_file(root / "manifest.txt"));
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty() && line[0] != '#') ids.push_back(line);
        }
        return ids;
    }
    if (!fs::is_directory(root / "images")) throw DataError("missing images/ directory under " + root.string());
    for (const auto& de : fs::directory_iterator(root / "images")) {
        auto ext = de.path().extension().string();
        if (std::find(raster_extensions().begin(), raster_extensions().end(), ext) != raster_extensions().end())
            ids.push_back(de.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

inline DatasetEntry load_dataset_entry(const fs::path& root, const std::string& id, bool require_truth) {
    auto img = find_raster(root / "images", id);
    auto fov = find_raster(root / "fov", id);
    if (!img) throw DataError("missing image for id '" + id + "' in " + (root / "images").string());
    if (!fov) throw DataError("missing FOV mask for id '" + id + "' in " + (root / "fov").string());
    auto truth = find_raster(root / "truth", id);
    if (require_truth && !truth) throw DataError("missing truth mask for id '" + id + "'");
    auto e = load_entry(*img, *fov, truth);
    e.image_id = id;
    return e;
}

inline std::vector<DatasetEntry> load_dataset(const fs::path& root, bool require_truth) {
    std::vector<DatasetEntry> out;
    for (const auto& id : dataset_ids(root)) out.push_back(load_dataset_entry(root, id, require_truth));
    if (out.empty()) throw DataError("no images found under " + root.string());
    return out;
}

inline void save_dataset_entry(const fs::path& root, const DatasetEntry& e, const RasterTags& tags = {}) {
    write_png(root / "images" / (e.image_id + ".png"), e.image, tags);
    write_png(root / "fov" / (e.image_id + ".png"), mask_to_gray8(e.fov), tags);
    if (e.truth) write_png(root / "truth" / (e.image_id + ".png"), mask_to_gray8(*e.truth), tags);
}

}  // namespace antvessel
