#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "error.hpp"

namespace raylf {

// Dense row-major single-channel raster.
template <typename T>
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Plane() = default;
    Plane(int w, int h, T fill = T{})
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        require(w > 0 && h > 0, "Plane: dimensions must be positive");
    }

    T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const T& at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    // Border-replicated read; defined for any (x, y).
    T at_clamped(int x, int y) const {
        x = std::clamp(x, 0, width - 1);
        y = std::clamp(y, 0, height - 1);
        return at(x, y);
    }

    const T* row(int y) const { return data.data() + static_cast<std::size_t>(y) * width; }
    T* row(int y) { return data.data() + static_cast<std::size_t>(y) * width; }

    bool same_size(const Plane& o) const { return width == o.width && height == o.height; }

    friend bool operator==(const Plane& a, const Plane& b) {
        return a.width == b.width && a.height == b.height && a.data == b.data;
    }
};

using Image8 = Plane<std::uint8_t>;

inline std::uint8_t clamp_u8(int v) {
    return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

// Axis-aligned pixel rectangle, [x, x+w) x [y, y+h).
struct BlockRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

inline void require_block_in(const BlockRect& b, int width, int height) {
    require(b.w > 0 && b.h > 0, "block: empty rectangle");
    require(b.x >= 0 && b.y >= 0 && b.x + b.w <= width && b.y + b.h <= height,
            "block: rectangle outside frame");
}

} // namespace raylf
