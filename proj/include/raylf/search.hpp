#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <utility>

#include "bitio.hpp"
#include "predict.hpp"

namespace raylf {

struct SearchConfig {
    int window = 8;  // micro-image steps each direction
    Precision precision = Precision::Quarter;
    double lambda = 0;  // rate weight; 0 = pure SAD

    void validate() const { require(window >= 0, "search: negative window"); }
};

struct SearchResult {
    RayMotionVector mv;
    long long sad = 0;
    double cost = 0;
};

struct PixelSearchResult {
    int mvx_q = 0;  // quarter-pel pixel units
    int mvy_q = 0;
    long long sad = 0;
    double cost = 0;
};

inline long long block_sad(const Image8& a, const BlockRect& b, const Image8& p) {
    long long s = 0;
    for (int y = 0; y < b.h; ++y) {
        const std::uint8_t* ra = a.row(b.y + y) + b.x;
        const std::uint8_t* rp = p.row(y);
        for (int x = 0; x < b.w; ++x) {
            const int d = int(ra[x]) - int(rp[x]);
            s += d < 0 ? -d : d;
        }
    }
    return s;
}

namespace detail {

// SAD of the current block against the reference block displaced by whole
// pixels (ox, oy), border-replicated. Aborts once the partial sum alone
// exceeds `abort_above` (strictly), which cannot disturb the argmin: the
// partial sum is a lower bound, so the candidate's final cost is strictly
// worse than the incumbent's and loses every tie-break.
inline long long displaced_sad(const Image8& cur, const BlockRect& b, const Image8& ref,
                               int ox, int oy, long long abort_above) {
    const int x0 = b.x + ox;
    const int y0 = b.y + oy;
    long long s = 0;
    if (x0 >= 0 && y0 >= 0 && x0 + b.w <= ref.width && y0 + b.h <= ref.height) {
        for (int y = 0; y < b.h; ++y) {
            const std::uint8_t* rc = cur.row(b.y + y) + b.x;
            const std::uint8_t* rr = ref.row(y0 + y) + x0;
            int row = 0;
            for (int x = 0; x < b.w; ++x) {
                const int d = int(rc[x]) - int(rr[x]);
                row += d < 0 ? -d : d;
            }
            s += row;
            if (s > abort_above) return s;
        }
        return s;
    }
    for (int y = 0; y < b.h; ++y) {
        for (int x = 0; x < b.w; ++x) {
            const int d = int(cur.at(b.x + x, b.y + y)) - int(ref.at_clamped(x0 + x, y0 + y));
            s += d < 0 ? -d : d;
        }
        if (s > abort_above) return s;
    }
    return s;
}

inline int mv_rate_bits(const ScaledMv& d, const ScaledMv& pred) {
    return se_length(d.ds - pred.ds) + se_length(d.dt - pred.dt);
}

} // namespace detail

// Exhaustive whole micro-image search over [-window, window]^2.
// Cost = SAD + lambda * (signed Exp-Golomb bits of the scaled mv diff).
// Ties resolve by smaller SAD, then |dks|+|dkt|, then dkt, then dks.
inline SearchResult search_integer(const LensletFrame& cur, const BlockRect& b,
                                   const LensletFrame& ref, const SearchConfig& cfg,
                                   const ScaledMv& pred = {}) {
    cfg.validate();
    cur.validate();
    ref.validate();
    require(cur.grid.px == ref.grid.px && cur.grid.py == ref.grid.py,
            "search: mismatched lattice pitch");
    require_block_in(b, cur.image.width, cur.image.height);

    SearchResult best;
    best.sad = std::numeric_limits<long long>::max();
    best.cost = std::numeric_limits<double>::infinity();
    bool have = false;

    const int w = cfg.window;
    for (int dkt = -w; dkt <= w; ++dkt)
        for (int dks = -w; dks <= w; ++dks) {
            const int rate = detail::mv_rate_bits({4 * dks, 4 * dkt}, pred);
            long long abort_above = std::numeric_limits<long long>::max();
            if (have) {
                const double headroom = best.cost - cfg.lambda * rate;
                if (headroom < 0) continue;
                if (headroom < 1e18) abort_above = static_cast<long long>(headroom);
            }
            const long long sad = detail::displaced_sad(
                cur.image, b, ref.image, dks * ref.grid.px, dkt * ref.grid.py, abort_above);
            const double cost = double(sad) + cfg.lambda * rate;

            if (!have) {
                have = true;
            } else if (cost != best.cost ? cost > best.cost : [&] {
                           if (sad != best.sad) return sad > best.sad;
                           const int na = std::abs(dks) + std::abs(dkt);
                           const int nb = std::abs(best.mv.dks) + std::abs(best.mv.dkt);
                           if (na != nb) return na > nb;
                           if (dkt != best.mv.dkt) return dkt > best.mv.dkt;
                           return dks >= best.mv.dks;
                       }()) {
                continue;
            }
            best.mv = RayMotionVector{dks, dkt, 0, 0};
            best.sad = sad;
            best.cost = cost;
        }
    return best;
}

namespace detail {

// Fractional candidate visit order: (0,0) first, then ascending by
// qs+qt, then qs, then qt. Ties in cost and SAD keep the earlier candidate.
inline const std::array<std::pair<int, int>, 16>& frac_scan_order() {
    static const std::array<std::pair<int, int>, 16> order = [] {
        std::array<std::pair<int, int>, 16> o;
        int n = 0;
        for (int sum = 0; sum <= 6; ++sum)
            for (int qs = 0; qs <= 3; ++qs)
                for (int qt = 0; qt <= 3; ++qt)
                    if (qs + qt == sum) o[n++] = {qs, qt};
        return o;
    }();
    return order;
}

} // namespace detail

// Fractional refinement around an integer anchor: the anchor stays fixed,
// every (alpha, beta) pair allowed by the precision mode is evaluated with
// the full interpolation pipeline.
inline SearchResult refine_fractional(const LensletFrame& cur, const BlockRect& b,
                                      const LensletFrame& ref, const SearchResult& base,
                                      const SearchConfig& cfg, const ScaledMv& pred = {}) {
    cfg.validate();
    if (cfg.precision == Precision::Integer) return base;

    SearchResult best = base;
    bool have = false;
    for (const auto& [qs, qt] : detail::frac_scan_order()) {
        if (cfg.precision == Precision::Half && (qs % 2 || qt % 2)) continue;

        RayMotionVector mv{base.mv.dks, base.mv.dkt, qs, qt};
        const Image8 p = predict_fractional(ref, b, mv);
        const long long sad = block_sad(cur.image, b, p);
        const double cost =
            double(sad) + cfg.lambda * detail::mv_rate_bits(scale_rmv(mv), pred);

        if (!have || cost < best.cost || (cost == best.cost && sad < best.sad)) {
            best = SearchResult{mv, sad, cost};
            have = true;
        }
    }
    return best;
}

// Conventional baseline: exhaustive integer-pixel search over
// [-window*px, window*px]^2 followed by quarter-pel refinement, same rate
// term (quarter-pel diff against the predictor), same tie-break order.
inline PixelSearchResult full_search_conventional(const LensletFrame& cur,
                                                  const BlockRect& b,
                                                  const LensletFrame& ref,
                                                  const SearchConfig& cfg,
                                                  const ScaledMv& pred = {}) {
    cfg.validate();
    cur.validate();
    ref.validate();
    require_block_in(b, cur.image.width, cur.image.height);

    const int wx = cfg.window * ref.grid.px;
    const int wy = cfg.window * ref.grid.py;

    PixelSearchResult best;
    best.sad = std::numeric_limits<long long>::max();
    best.cost = std::numeric_limits<double>::infinity();
    bool have = false;
    int bx = 0, by = 0;

    for (int my = -wy; my <= wy; ++my)
        for (int mx = -wx; mx <= wx; ++mx) {
            const int rate = detail::mv_rate_bits({4 * mx, 4 * my}, pred);
            long long abort_above = std::numeric_limits<long long>::max();
            if (have) {
                const double headroom = best.cost - cfg.lambda * rate;
                if (headroom < 0) continue;
                if (headroom < 1e18) abort_above = static_cast<long long>(headroom);
            }
            const long long sad = detail::displaced_sad(cur.image, b, ref.image, mx, my,
                                                        abort_above);
            const double cost = double(sad) + cfg.lambda * rate;

            if (!have) {
                have = true;
            } else if (cost != best.cost ? cost > best.cost : [&] {
                           if (sad != best.sad) return sad > best.sad;
                           const int na = std::abs(mx) + std::abs(my);
                           const int nb = std::abs(bx) + std::abs(by);
                           if (na != nb) return na > nb;
                           if (my != by) return my > by;
                           return mx >= bx;
                       }()) {
                continue;
            }
            bx = mx;
            by = my;
            best.sad = sad;
            best.cost = cost;
        }

    best.mvx_q = 4 * bx;
    best.mvy_q = 4 * by;

    // quarter-pel pass
    PixelSearchResult ref9 = best;
    bool have_f = false;
    for (const auto& [fx, fy] : detail::frac_scan_order()) {
        const int mvx = 4 * bx + fx;
        const int mvy = 4 * by + fy;
        const Image8 p = predict_conventional(ref, b, mvx, mvy);
        const long long sad = block_sad(cur.image, b, p);
        const double cost =
            double(sad) + cfg.lambda * detail::mv_rate_bits({mvx, mvy}, pred);
        if (!have_f || cost < ref9.cost || (cost == ref9.cost && sad < ref9.sad)) {
            ref9 = PixelSearchResult{mvx, mvy, sad, cost};
            have_f = true;
        }
    }
    return ref9;
}

} // namespace raylf
