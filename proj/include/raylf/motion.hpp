#pragma once

#include "error.hpp"

namespace raylf {

// Motion vector on the ray-space lattice. (dks, dkt) are whole micro-image
// steps; (aq, bq) index the fractional part in quarter steps, 0..3.
struct RayMotionVector {
    int dks = 0;
    int dkt = 0;
    int aq = 0;
    int bq = 0;

    double alpha() const { return aq / 4.0; }
    double beta() const { return bq / 4.0; }

    void validate() const {
        require(aq >= 0 && aq <= 3 && bq >= 0 && bq <= 3,
                "ray motion vector: fractional index out of range");
    }

    friend bool operator==(const RayMotionVector& a, const RayMotionVector& b) {
        return a.dks == b.dks && a.dkt == b.dkt && a.aq == b.aq && a.bq == b.bq;
    }
};

struct ScaledMv {
    int ds = 0;
    int dt = 0;
};

// Wire form: one integer per axis in quarter steps, d = 4*dk + q.
inline ScaledMv scale_rmv(const RayMotionVector& m) {
    m.validate();
    return {4 * m.dks + m.aq, 4 * m.dkt + m.bq};
}

// Inverse decomposition; floor division keeps q in 0..3 for negative d.
inline RayMotionVector unscale_rmv(const ScaledMv& d) {
    auto split = [](int v, int& whole, int& frac) {
        whole = (v >= 0) ? v / 4 : -((-v + 3) / 4);
        frac = v - 4 * whole;
    };
    RayMotionVector m;
    split(d.ds, m.dks, m.aq);
    split(d.dt, m.dkt, m.bq);
    return m;
}

enum class Precision { Integer, Half, Quarter };

} // namespace raylf
