#pragma once

#include <cstdint>
#include <vector>

#include "filters.hpp"
#include "lightfield.hpp"
#include "motion.hpp"

namespace raylf {

// Whole micro-image displacement: every pixel moves by the same multiple of
// the lattice pitch. Out-of-frame reads replicate the border.
inline Image8 predict_integer(const LensletFrame& ref, const BlockRect& b,
                              int dks, int dkt) {
    ref.validate();
    require_block_in(b, ref.image.width, ref.image.height);
    const int ox = dks * ref.grid.px;
    const int oy = dkt * ref.grid.py;

    Image8 out(b.w, b.h);
    for (int y = 0; y < b.h; ++y)
        for (int x = 0; x < b.w; ++x)
            out.at(x, y) = ref.image.at_clamped(b.x + x + ox, b.y + y + oy);
    return out;
}

namespace detail {

// Two-pass separable interpolation on a lattice of stride (sx, sy).
// Pass order: horizontal then vertical. Each pass normalizes with
// (acc + 32) >> 6; intermediates fit 16 bits; clamping happens once at
// the very end. Reads outside the frame replicate the border.
inline void interp_block(const Image8& ref, const BlockRect& b,
                         int whole_x, int whole_y, int qx, int qy,
                         int sx, int sy, std::uint8_t* dst) {
    const auto& fx = filter_coeffs(qx).taps;
    const auto& fy = filter_coeffs(qy).taps;

    const int x0 = b.x + whole_x * sx;
    const int y0 = b.y + whole_y * sy;

    // Horizontal pass over every row the vertical taps can touch.
    const int rows = b.h + 8 * sy;
    const int ry0 = y0 - 4 * sy;
    std::vector<std::int16_t> h(static_cast<std::size_t>(rows) * b.w);
    for (int r = 0; r < rows; ++r) {
        std::int16_t* hrow = h.data() + static_cast<std::size_t>(r) * b.w;
        for (int x = 0; x < b.w; ++x) {
            int acc = 0;
            for (int m = -4; m <= 4; ++m)
                acc += fx[m + 4] * ref.at_clamped(x0 + x + m * sx, ry0 + r);
            hrow[x] = static_cast<std::int16_t>((acc + 32) >> 6);
        }
    }

    for (int y = 0; y < b.h; ++y) {
        std::uint8_t* drow = dst + static_cast<std::size_t>(y) * b.w;
        for (int x = 0; x < b.w; ++x) {
            int acc = 0;
            for (int m = -4; m <= 4; ++m)
                acc += fy[m + 4] * h[static_cast<std::size_t>(y + (m + 4) * sy) * b.w + x];
            drow[x] = clamp_u8((acc + 32) >> 6);
        }
    }
}

} // namespace detail

// Fractional ray-space compensation: per output pixel, the 9x9 separable
// kernel reads samples spaced one micro-image apart, so each tap lands on
// the same intra-micro-image offset (the same ray direction).
inline Image8 predict_fractional(const LensletFrame& ref, const BlockRect& b,
                                 const RayMotionVector& mv) {
    ref.validate();
    mv.validate();
    require_block_in(b, ref.image.width, ref.image.height);

    Image8 out(b.w, b.h);
    detail::interp_block(ref.image, b, mv.dks, mv.dkt, mv.aq, mv.bq,
                         ref.grid.px, ref.grid.py, out.data.data());
    return out;
}

// Conventional translational compensation at quarter-pel precision.
// (mvx_q, mvy_q) are quarter-pixel units. Same filter bank, same rounding
// pipeline, unit stride. Deliberately not routed through interp_block so the
// kernels stay independently testable against each other.
inline Image8 predict_conventional(const LensletFrame& ref, const BlockRect& b,
                                   int mvx_q, int mvy_q) {
    ref.validate();
    require_block_in(b, ref.image.width, ref.image.height);

    const int ax = (mvx_q >= 0) ? mvx_q / 4 : -((-mvx_q + 3) / 4);
    const int ay = (mvy_q >= 0) ? mvy_q / 4 : -((-mvy_q + 3) / 4);
    const auto& cx = filter_coeffs(mvx_q - 4 * ax).taps;
    const auto& cy = filter_coeffs(mvy_q - 4 * ay).taps;

    const int left = b.x + ax - 4;
    const int top = b.y + ay - 4;
    const int rows = b.h + 8;

    std::vector<std::int16_t> tmp(static_cast<std::size_t>(rows) * b.w);
    std::int16_t* t = tmp.data();
    for (int r = 0; r < rows; ++r)
        for (int x = 0; x < b.w; ++x) {
            int acc = 32;
            for (int m = 0; m < 9; ++m)
                acc += cx[m] * ref.image.at_clamped(left + x + m, top + r);
            *t++ = static_cast<std::int16_t>(acc >> 6);
        }

    Image8 out(b.w, b.h);
    for (int y = 0; y < b.h; ++y)
        for (int x = 0; x < b.w; ++x) {
            int acc = 32;
            const std::int16_t* col = tmp.data() + static_cast<std::size_t>(y) * b.w + x;
            for (int m = 0; m < 9; ++m)
                acc += cy[m] * col[static_cast<std::size_t>(m) * b.w];
            out.at(x, y) = clamp_u8(acc >> 6);
        }
    return out;
}

} // namespace raylf
