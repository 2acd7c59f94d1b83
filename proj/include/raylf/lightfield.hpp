#pragma once

#include <vector>

#include "image.hpp"

namespace raylf {

// Placement of the micro-image lattice on a sensor raster.
// Micro-image (ks, kt) occupies pixels
//   [origin_x + ks*px, origin_x + (ks+1)*px) x [origin_y + kt*py, ...).
struct LensletGrid {
    int px = 8;        // micro-image pitch in pixels, horizontal
    int py = 8;        // vertical
    int ns = 0;        // micro-image count, horizontal
    int nt = 0;        // vertical
    int origin_x = 0;  // top-left corner of micro-image (0,0)
    int origin_y = 0;

    int span_x() const { return origin_x + ns * px; }
    int span_y() const { return origin_y + nt * py; }

    void validate() const {
        require(px >= 1 && py >= 1, "grid: pitch must be >= 1");
        require(ns >= 1 && nt >= 1, "grid: micro-image counts must be >= 1");
        require(origin_x >= 0 && origin_y >= 0, "grid: negative origin");
    }
};

// One temporal frame in lenslet (raw sensor) layout.
struct LensletFrame {
    Image8 image;
    LensletGrid grid;

    void validate() const {
        grid.validate();
        require(image.width == grid.span_x() && image.height == grid.span_y(),
                "lenslet frame: image dimensions do not match grid");
    }
};

// Multiview layout: au x av sub-aperture views, each ns x nt samples.
// views[v * au + u]; u grows left-to-right, v top-to-bottom.
struct LightField4D {
    int au = 0;
    int av = 0;
    std::vector<Image8> views;

    const Image8& view(int u, int v) const { return views[static_cast<std::size_t>(v) * au + u]; }
    Image8& view(int u, int v) { return views[static_cast<std::size_t>(v) * au + u]; }

    int ns() const { return views.empty() ? 0 : views.front().width; }
    int nt() const { return views.empty() ? 0 : views.front().height; }

    void validate() const {
        require(au >= 1 && av >= 1, "light field: angular resolution must be >= 1");
        require(views.size() == static_cast<std::size_t>(au) * av,
                "light field: view count does not match angular resolution");
        for (const auto& v : views)
            require(v.same_size(views.front()) && v.width > 0,
                    "light field: views must share one non-empty size");
    }
};

} // namespace raylf
