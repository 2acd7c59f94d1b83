#pragma once

#include <array>

#include "error.hpp"

namespace raylf {

// Quarter-step interpolation taps, integer-valued, nominal gain 64.
// All four are carried in one 9-tap frame covering offsets m = -4..+4;
// taps[m + 4] weights the sample m lattice steps from the anchor.
//
// Effective phase relative to the anchor: q=0 -> 0, q=1 -> +1/4,
// q=2 -> -1/2 (the 8-tap pair sits at m = -4..+3), q=3 -> -1/4.
// Search code reasons in anchor+phase positions; the wire format carries
// (dk, q) directly, so the asymmetry never leaks into the bitstream.
struct InterpFilter1D {
    std::array<int, 9> taps{};

    int gain() const {
        int s = 0;
        for (int t : taps) s += t;
        return s;
    }
};

inline const InterpFilter1D& filter_coeffs(int quarter) {
    static const std::array<InterpFilter1D, 4> bank = {{
        {{0, 0, 0, 0, 64, 0, 0, 0, 0}},
        {{0, -1, 4, -10, 58, 17, -5, 1, 0}},
        {{-1, 4, -11, 40, 40, -11, 4, -1, 0}},
        {{0, 1, -5, 17, 58, -10, 4, -1, 0}},
    }};
    require(quarter >= 0 && quarter <= 3, "filter_coeffs: quarter index out of range");
    return bank[quarter];
}

// Phase of filter q in quarter steps: {0, +1, -2, -1}.
inline int filter_phase_q(int quarter) {
    static const std::array<int, 4> ph = {0, 1, -2, -1};
    require(quarter >= 0 && quarter <= 3, "filter_phase_q: quarter index out of range");
    return ph[quarter];
}

// Candidate position on the quarter-step axis for anchor dk and filter q.
inline int quarter_position(int dk, int q) { return 4 * dk + filter_phase_q(q); }

// Separable 2D kernel: outer product of the two 1D filters, gain 64*64.
struct InterpFilter2D {
    std::array<std::array<int, 9>, 9> w{};

    long long gain() const {
        long long s = 0;
        for (const auto& r : w)
            for (int t : r) s += t;
        return s;
    }
};

inline InterpFilter2D separable_coeffs(int alpha_q, int beta_q) {
    const InterpFilter1D& fa = filter_coeffs(alpha_q);
    const InterpFilter1D& fb = filter_coeffs(beta_q);
    InterpFilter2D k;
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 9; ++i)
            k.w[j][i] = fb.taps[j] * fa.taps[i];
    return k;
}

} // namespace raylf
