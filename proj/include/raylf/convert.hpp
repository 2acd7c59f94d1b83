#pragma once

#include "lightfield.hpp"

namespace raylf {

// Lenslet -> multiview rearrangement. Pixel (u, v) inside micro-image
// (ks, kt) becomes sample (ks, kt) of view (u, v). Bijective on the grid
// span, so no pixel is lost or duplicated.
inline LightField4D lenslet_to_multiview(const LensletFrame& f) {
    f.validate();
    const LensletGrid& g = f.grid;

    LightField4D lf;
    lf.au = g.px;
    lf.av = g.py;
    lf.views.assign(static_cast<std::size_t>(g.px) * g.py, Image8(g.ns, g.nt));

    for (int kt = 0; kt < g.nt; ++kt)
        for (int ks = 0; ks < g.ns; ++ks) {
            const int bx = g.origin_x + ks * g.px;
            const int by = g.origin_y + kt * g.py;
            for (int v = 0; v < g.py; ++v)
                for (int u = 0; u < g.px; ++u)
                    lf.view(u, v).at(ks, kt) = f.image.at(bx + u, by + v);
        }
    return lf;
}

// Multiview -> lenslet, inverse of the above. The angular resolution becomes
// the micro-image pitch (P_x = A_u, P_y = A_v).
inline LensletFrame multiview_to_lenslet(const LightField4D& lf,
                                         int origin_x = 0, int origin_y = 0) {
    lf.validate();
    require(origin_x == 0 && origin_y == 0,
            "multiview_to_lenslet: nonzero origin not representable");

    LensletFrame f;
    f.grid = LensletGrid{lf.au, lf.av, lf.ns(), lf.nt(), 0, 0};
    f.image = Image8(f.grid.span_x(), f.grid.span_y());

    for (int kt = 0; kt < f.grid.nt; ++kt)
        for (int ks = 0; ks < f.grid.ns; ++ks)
            for (int v = 0; v < lf.av; ++v)
                for (int u = 0; u < lf.au; ++u)
                    f.image.at(ks * lf.au + u, kt * lf.av + v) = lf.view(u, v).at(ks, kt);

    f.validate();
    return f;
}

} // namespace raylf
