#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "antvessel/error.hpp"

namespace antvessel {

/// Row-major 2-D raster. Pixel (x, y) lives at index y * width + x.
template <class T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
        if (width <= 0 || height <= 0) {
            throw UsageError("grid dimensions must be positive, got " + std::to_string(width) +
                             "x" + std::to_string(height));
        }
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }
    Grid(int width, int height, std::vector<T> data) : width_(width), height_(height), data_(std::move(data)) {
        if (width <= 0 || height <= 0 ||
            data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw UsageError("grid data length does not match dimensions");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    template <class U>
    bool same_shape(const Grid<U>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

using RgbImage = Grid<Rgb>;
/// Real-valued intensities in [0, 255].
using GrayImage = Grid<double>;
/// 0 / 1 per pixel; role (FOV, vessel truth, prediction) is given by context.
using BinaryMask = Grid<std::uint8_t>;

struct Pixel {
    int x = 0;
    int y = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

template <class T, class U>
void require_same_shape(const Grid<T>& a, const Grid<U>& b, const std::string& what) {
    if (!a.same_shape(b)) {
        throw DataError("dimension mismatch (" + what + "): " + std::to_string(a.width()) + "x" +
                        std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                        std::to_string(b.height()));
    }
}

inline std::size_t count_set(const BinaryMask& m) {
    std::size_t n = 0;
    for (auto v : m.data()) n += v != 0;
    return n;
}

/// Set pixels of a mask in row-major order.
inline std::vector<Pixel> set_pixels(const BinaryMask& m) {
    std::vector<Pixel> out;
    out.reserve(count_set(m));
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m(x, y)) out.push_back({x, y});
    return out;
}

}  // namespace antvessel
