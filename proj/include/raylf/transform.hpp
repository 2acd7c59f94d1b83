#pragma once

#include <array>
#include <cstdint>

#include "error.hpp"

namespace raylf {

// 8x8 type-II DCT basis, orthonormal scaling, fixed point at 2^13:
// B[k][n] = round(8192 * c_k * cos(pi*(2n+1)*k/16)), c_0 = sqrt(1/8),
// c_k = 1/2 otherwise.
inline constexpr std::array<std::array<std::int16_t, 8>, 8> kDctBasis = {{
    {2896, 2896, 2896, 2896, 2896, 2896, 2896, 2896},
    {4017, 3406, 2276, 799, -799, -2276, -3406, -4017},
    {3784, 1567, -1567, -3784, -3784, -1567, 1567, 3784},
    {3406, -799, -4017, -2276, 2276, 4017, 799, -3406},
    {2896, -2896, -2896, 2896, 2896, -2896, -2896, 2896},
    {2276, -4017, 799, 3406, -3406, -799, 4017, -2276},
    {1567, -3784, 3784, -1567, -1567, 3784, -3784, 1567},
    {799, -2276, 3406, -4017, 4017, -3406, 2276, -799},
}};

// Quantizer step in 1/64 units: kQstep64[qp] = round(64 * 2^((qp-4)/6)).
// Keeping the step integral makes encode/decode reconstruction identical
// on every platform; no floating point touches the coding path.
inline constexpr std::array<int, 52> kQstep64 = {
    40, 45, 51, 57, 64, 72, 81, 91, 102, 114, 128, 144, 161,
    181, 203, 228, 256, 287, 323, 362, 406, 456, 512, 575, 645, 724,
    813, 912, 1024, 1149, 1290, 1448, 1625, 1825, 2048, 2299, 2580, 2896, 3251,
    3649, 4096, 4598, 5161, 5793, 6502, 7298, 8192, 9195, 10321, 11585, 13004, 14596,
};

inline constexpr int kMaxQp = 51;

// Hard ceiling on |level| a well-formed stream can carry. An 8-bit residual
// block cannot quantize above this at any legal qp; the decoder rejects
// larger values before they reach the inverse transform.
inline constexpr int kMaxCoeffLevel = 8192;

inline double qstep(int qp) {
    require(qp >= 0 && qp <= kMaxQp, "qp out of range");
    return kQstep64[qp] / 64.0;
}

// Diagonal zigzag scan of an 8x8 block, raster indices.
inline constexpr std::array<int, 64> kZigzag = [] {
    std::array<int, 64> z{};
    int i = 0;
    for (int d = 0; d < 15; ++d) {
        if (d % 2 == 0) {  // up-right
            int y = d < 8 ? d : 7;
            int x = d - y;
            while (y >= 0 && x < 8) z[i++] = y-- * 8 + x++;
        } else {  // down-left
            int x = d < 8 ? d : 7;
            int y = d - x;
            while (x >= 0 && y < 8) z[i++] = y++ * 8 + x--;
        }
    }
    return z;
}();

using ResidualBlock = std::array<std::int16_t, 64>;  // row-major, [-255, 255]
using CoeffBlock = std::array<std::int32_t, 64>;

namespace detail {

// out = B * in * B^T, staged: each matrix product is followed by a rounding
// shift of 13 so intermediates stay well inside 32 bits.
template <typename In>
inline CoeffBlock dct_2d(const In& in) {
    std::array<std::int32_t, 64> tmp;
    for (int k = 0; k < 8; ++k)
        for (int n = 0; n < 8; ++n) {
            std::int64_t acc = 0;
            for (int m = 0; m < 8; ++m) acc += std::int64_t{kDctBasis[k][m]} * in[m * 8 + n];
            tmp[k * 8 + n] = static_cast<std::int32_t>((acc + 4096) >> 13);
        }
    CoeffBlock out;
    for (int k = 0; k < 8; ++k)
        for (int l = 0; l < 8; ++l) {
            std::int64_t acc = 0;
            for (int m = 0; m < 8; ++m) acc += std::int64_t{kDctBasis[l][m]} * tmp[k * 8 + m];
            out[k * 8 + l] = static_cast<std::int32_t>((acc + 4096) >> 13);
        }
    return out;
}

inline ResidualBlock idct_2d(const CoeffBlock& c) {
    std::array<std::int32_t, 64> tmp;
    for (int n = 0; n < 8; ++n)
        for (int l = 0; l < 8; ++l) {
            std::int64_t acc = 0;
            for (int m = 0; m < 8; ++m) acc += std::int64_t{kDctBasis[m][n]} * c[m * 8 + l];
            tmp[n * 8 + l] = static_cast<std::int32_t>((acc + 4096) >> 13);
        }
    ResidualBlock out;
    for (int n = 0; n < 8; ++n)
        for (int p = 0; p < 8; ++p) {
            std::int64_t acc = 0;
            for (int m = 0; m < 8; ++m) acc += std::int64_t{kDctBasis[m][p]} * tmp[n * 8 + m];
            const std::int64_t v = (acc + 4096) >> 13;
            out[n * 8 + p] = static_cast<std::int16_t>(
                v < INT16_MIN ? INT16_MIN : (v > INT16_MAX ? INT16_MAX : v));
        }
    return out;
}

} // namespace detail

// Forward transform + dead-zone quantization. The dead zone uses offset 1/3:
// level = sign * floor(|c| / Q + 1/3), evaluated in exact integer arithmetic
// as (192*|c| + Qstep64) / (3*Qstep64).
inline CoeffBlock transform_quant(const ResidualBlock& residual, int qp) {
    require(qp >= 0 && qp <= kMaxQp, "qp out of range");
    const std::int64_t q64 = kQstep64[qp];
    const CoeffBlock c = detail::dct_2d(residual);

    CoeffBlock levels;
    for (int i = 0; i < 64; ++i) {
        const std::int64_t a = c[i] < 0 ? -std::int64_t{c[i]} : c[i];
        const std::int64_t l = (192 * a + q64) / (3 * q64);
        levels[i] = static_cast<std::int32_t>(c[i] < 0 ? -l : l);
    }
    return levels;
}

// Dequantize + inverse transform: c' = round(level * Q), symmetric rounding.
inline ResidualBlock dequant_itransform(const CoeffBlock& levels, int qp) {
    require(qp >= 0 && qp <= kMaxQp, "qp out of range");
    const std::int64_t q64 = kQstep64[qp];

    CoeffBlock c;
    for (int i = 0; i < 64; ++i) {
        const std::int64_t a = levels[i] < 0 ? -std::int64_t{levels[i]} : levels[i];
        const std::int64_t r = (a * q64 + 32) >> 6;
        c[i] = static_cast<std::int32_t>(levels[i] < 0 ? -r : r);
    }
    return detail::idct_2d(c);
}

} // namespace raylf
