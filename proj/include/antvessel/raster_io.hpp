#pragma once

// PNG (via libpng) and binary PGM/PPM reading and writing.

#include <png.h>

#include <cstdint>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "antvessel/file_util.hpp"
#include "antvessel/grid.hpp"

namespace antvessel {

using Gray8 = Grid<std::uint8_t>;
using Gray16 = Grid<std::uint16_t>;

/// Key/value metadata written as PNG tEXt chunks or PNM comment lines.
using RasterTags = std::vector<std::pair<std::string, std::string>>;

namespace detail {

struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 or 3
    std::vector<std::uint8_t> pixels;
};

inline bool is_png(const std::string& bytes) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

inline Decoded decode_png(const std::string& bytes, bool want_rgb, const std::string& origin) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
        throw DataError("undecodable PNG " + origin + ": " + img.message);
    }
    img.format = want_rgb ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    Decoded out;
    out.width = static_cast<int>(img.width);
    out.height = static_cast<int>(img.height);
    out.channels = want_rgb ? 3 : 1;
    out.pixels.resize(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        throw DataError("undecodable PNG " + origin + ": " + msg);
    }
    return out;
}

// Binary P5 / P6 with maxval up to 65535; 16-bit samples are scaled to 8 bits.
inline Decoded decode_pnm(const std::string& bytes, const std::string& origin) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < bytes.size()) {
            char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&] {
        skip_ws();
        long v = 0;
        std::size_t start = pos;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1'000'000) throw DataError("PNM header value too large in " + origin);
            ++pos;
        }
        if (pos == start) throw DataError("malformed PNM header in " + origin);
        return static_cast<int>(v);
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw DataError("unsupported raster format (expected PNG, P5 or P6): " + origin);
    }
    Decoded out;
    out.channels = bytes[1] == '6' ? 3 : 1;
    pos = 2;
    out.width = read_int();
    out.height = read_int();
    int maxval = read_int();
    if (out.width <= 0 || out.height <= 0 || maxval <= 0 || maxval > 65535) {
        throw DataError("invalid PNM header in " + origin);
    }
    ++pos;  // single whitespace byte before the raster
    const std::size_t n = static_cast<std::size_t>(out.width) * out.height * out.channels;
    const std::size_t bps = maxval > 255 ? 2 : 1;
    if (bytes.size() < pos + n * bps) throw DataError("truncated PNM raster: " + origin);
    out.pixels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        unsigned v = bps == 1 ? static_cast<unsigned char>(bytes[pos + i])
                              : (static_cast<unsigned>(static_cast<unsigned char>(bytes[pos + 2 * i])) << 8) |
                                    static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
        out.pixels[i] = static_cast<std::uint8_t>((v * 255u + maxval / 2) / static_cast<unsigned>(maxval));
    }
    return out;
}

inline Decoded decode_file(const fs::path& path, bool want_rgb) {
    if (!fs::exists(path)) throw DataError("missing file: " + path.string());
    std::string bytes = read_file(path);
    if (is_png(bytes)) return decode_png(bytes, want_rgb, path.string());
    return decode_pnm(bytes, path.string());
}

inline void png_write_to_string(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), len);
}

inline std::string encode_png(int width, int height, int color_type, int bit_depth,
                              const std::vector<png_bytep>& rows, const RasterTags& tags) {
    std::string out;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("libpng: cannot create write struct");
    png_infop info = png_create_info_struct(png);
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, info ? &info : nullptr);
        throw DataError("libpng: encoding failed");
    }
    png_set_write_fn(png, &out, png_write_to_string, nullptr);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_text> text(tags.size());
    for (std::size_t i = 0; i < tags.size(); ++i) {
        text[i].compression = PNG_TEXT_COMPRESSION_NONE;
        text[i].key = const_cast<char*>(tags[i].first.c_str());
        text[i].text = const_cast<char*>(tags[i].second.c_str());
    }
    if (!text.empty()) png_set_text(png, info, text.data(), static_cast<int>(text.size()));
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);  // rows are host-order uint16
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

inline std::string pnm_header(char kind, int w, int h, int maxval, const RasterTags& tags) {
    std::string s = std::string("P") + kind + "\n";
    for (const auto& [k, v] : tags) s += "# " + k + ": " + v + "\n";
    s += std::to_string(w) + " " + std::to_string(h) + "\n" + std::to_string(maxval) + "\n";
    return s;
}

}  // namespace detail

/// Reads a color raster (PNG of any color type, PPM P6, or PGM P5 replicated to RGB).
inline RgbImage read_rgb(const fs::path& path) {
    auto d = detail::decode_file(path, true);
    RgbImage img(d.width, d.height);
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (d.channels == 3) {
            img[i] = {d.pixels[3 * i], d.pixels[3 * i + 1], d.pixels[3 * i + 2]};
        } else {
            img[i] = {d.pixels[i], d.pixels[i], d.pixels[i]};
        }
    }
    return img;
}

/// Reads a single-channel 8-bit raster. Color inputs are reduced to the mean of
/// their channels (PNM) or libpng's gray conversion (PNG).
inline Gray8 read_gray8(const fs::path& path) {
    auto d = detail::decode_file(path, false);
    Gray8 img(d.width, d.height);
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (d.channels == 3) {
            unsigned s = d.pixels[3 * i] + d.pixels[3 * i + 1] + d.pixels[3 * i + 2];
            img[i] = static_cast<std::uint8_t>((s + 1) / 3);
        } else {
            img[i] = d.pixels[i];
        }
    }
    return img;
}

inline void write_png(const fs::path& path, const Gray8& img, const RasterTags& tags = {}) {
    std::vector<png_bytep> rows(img.height());
    auto& data = const_cast<Gray8&>(img).data();
    for (int y = 0; y < img.height(); ++y) rows[y] = data.data() + img.index(0, y);
    atomic_write(path, detail::encode_png(img.width(), img.height(), PNG_COLOR_TYPE_GRAY, 8, rows, tags));
}

inline void write_png(const fs::path& path, const RgbImage& img, const RasterTags& tags = {}) {
    std::vector<std::uint8_t> buf(img.size() * 3);
    for (std::size_t i = 0; i < img.size(); ++i) {
        buf[3 * i] = img[i].r;
        buf[3 * i + 1] = img[i].g;
        buf[3 * i + 2] = img[i].b;
    }
    std::vector<png_bytep> rows(img.height());
    for (int y = 0; y < img.height(); ++y) rows[y] = buf.data() + 3 * img.index(0, y);
    atomic_write(path, detail::encode_png(img.width(), img.height(), PNG_COLOR_TYPE_RGB, 8, rows, tags));
}

inline void write_png(const fs::path& path, const Gray16& img, const RasterTags& tags = {}) {
    auto& data = const_cast<Gray16&>(img).data();
    std::vector<png_bytep> rows(img.height());
    for (int y = 0; y < img.height(); ++y) rows[y] = reinterpret_cast<png_bytep>(data.data() + img.index(0, y));
    atomic_write(path, detail::encode_png(img.width(), img.height(), PNG_COLOR_TYPE_GRAY, 16, rows, tags));
}

inline void write_pgm(const fs::path& path, const Gray8& img, const RasterTags& tags = {}) {
    std::string s = detail::pnm_header('5', img.width(), img.height(), 255, tags);
    s.append(reinterpret_cast<const char*>(img.data().data()), img.size());
    atomic_write(path, s);
}

/// 16-bit PGM, big-endian samples.
inline void write_pgm(const fs::path& path, const Gray16& img, const RasterTags& tags = {}) {
    std::string s = detail::pnm_header('5', img.width(), img.height(), 65535, tags);
    for (auto v : img.data()) {
        s.push_back(static_cast<char>(v >> 8));
        s.push_back(static_cast<char>(v & 0xff));
    }
    atomic_write(path, s);
}

inline void write_ppm(const fs::path& path, const RgbImage& img, const RasterTags& tags = {}) {
    std::string s = detail::pnm_header('6', img.width(), img.height(), 255, tags);
    for (const auto& p : img.data()) {
        s.push_back(static_cast<char>(p.r));
        s.push_back(static_cast<char>(p.g));
        s.push_back(static_cast<char>(p.b));
    }
    atomic_write(path, s);
}

}  // namespace antvessel
