#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "convert.hpp"

namespace raylf {

inline double mse(const Image8& a, const Image8& b) {
    require(a.same_size(b), "mse: size mismatch");
    long long acc = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const int d = int(a.data[i]) - int(b.data[i]);
        acc += static_cast<long long>(d) * d;
    }
    return double(acc) / double(a.data.size());
}

inline double psnr_from_mse(double m) {
    if (m <= 0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

inline double psnr(const Image8& a, const Image8& b) { return psnr_from_mse(mse(a, b)); }

// Sequence-level PSNR on the multiview representation: squared error is
// pooled over every (view, frame) pair and converted to dB once. The views
// partition the lenslet raster, so this equals pooling raw frames directly.
inline double sequence_psnr(const std::vector<LensletFrame>& ref,
                            const std::vector<LensletFrame>& dec) {
    require(!ref.empty() && ref.size() == dec.size(), "psnr: sequence length mismatch");
    long long acc = 0;
    long long count = 0;
    for (std::size_t t = 0; t < ref.size(); ++t) {
        const LightField4D a = lenslet_to_multiview(ref[t]);
        const LightField4D b = lenslet_to_multiview(dec[t]);
        require(a.au == b.au && a.av == b.av && a.ns() == b.ns() && a.nt() == b.nt(),
                "psnr: view geometry mismatch");
        for (std::size_t v = 0; v < a.views.size(); ++v) {
            const Image8& va = a.views[v];
            const Image8& vb = b.views[v];
            for (std::size_t i = 0; i < va.data.size(); ++i) {
                const int d = int(va.data[i]) - int(vb.data[i]);
                acc += static_cast<long long>(d) * d;
            }
            count += static_cast<long long>(va.data.size());
        }
    }
    return psnr_from_mse(double(acc) / double(count));
}

struct RDPoint {
    double bits = 0;  // per frame
    double psnr = 0;  // dB
};

struct RDCurve {
    std::vector<RDPoint> points;
};

// Structural check: rates strictly increasing. Returns a warning string for
// a PSNR inversion instead of failing, since mild non-monotonicity is a
// property of the data, not of the curve object.
inline std::optional<std::string> validate_curve(const RDCurve& c) {
    require(c.points.size() >= 2, "rd curve: need at least two points");
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        require(c.points[i].bits > c.points[i - 1].bits,
                "rd curve: rates must be strictly increasing");
        if (c.points[i].psnr < c.points[i - 1].psnr)
            return "rd curve: psnr decreases between points " + std::to_string(i - 1) +
                   " and " + std::to_string(i);
    }
    return std::nullopt;
}

namespace detail {

// Least-squares cubic fit of y(x), x centered for conditioning.
struct Cubic {
    double x0 = 0;
    std::array<double, 4> c{};  // c0 + c1*d + c2*d^2 + c3*d^3, d = x - x0

    double integral(double a, double b) const {
        auto F = [&](double x) {
            const double d = x - x0;
            return c[0] * d + c[1] * d * d / 2 + c[2] * d * d * d / 3 +
                   c[3] * d * d * d * d / 4;
        };
        return F(b) - F(a);
    }
};

inline Cubic fit_cubic(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    require(n >= 4, "cubic fit: need at least four points");

    Cubic fit;
    for (double v : x) fit.x0 += v;
    fit.x0 /= double(n);

    long double a[4][5] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = x[i] - fit.x0;
        long double pw[4] = {1, d, d * d, d * d * d};
        for (int r = 0; r < 4; ++r) {
            for (int cc = 0; cc < 4; ++cc) a[r][cc] += pw[r] * pw[cc];
            a[r][4] += pw[r] * static_cast<long double>(y[i]);
        }
    }

    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(static_cast<double>(a[r][col])) >
                std::abs(static_cast<double>(a[piv][col])))
                piv = r;
        for (int cc = 0; cc < 5; ++cc) std::swap(a[col][cc], a[piv][cc]);
        require(a[col][col] != 0, "cubic fit: singular system");
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const long double f = a[r][col] / a[col][col];
            for (int cc = col; cc < 5; ++cc) a[r][cc] -= f * a[col][cc];
        }
    }
    for (int r = 0; r < 4; ++r) fit.c[r] = static_cast<double>(a[r][4] / a[r][r]);
    return fit;
}

} // namespace detail

// Average rate delta of `test` against `anchor` over the shared quality
// interval, in percent. Negative means the test curve spends fewer bits.
// Both curves need >= 4 points at distinct rates and overlapping PSNR spans.
inline double bd_rate(const RDCurve& anchor, const RDCurve& test) {
    require(anchor.points.size() >= 4 && test.points.size() >= 4,
            "bd_rate: need at least four points per curve");
    validate_curve(anchor);
    validate_curve(test);

    auto split = [](const RDCurve& c, std::vector<double>& xs, std::vector<double>& ys) {
        for (const RDPoint& p : c.points) {
            require(p.bits > 0, "bd_rate: nonpositive rate");
            require(std::isfinite(p.psnr), "bd_rate: non-finite psnr");
            xs.push_back(p.psnr);
            ys.push_back(std::log10(p.bits));
        }
    };
    std::vector<double> ax, ay, tx, ty;
    split(anchor, ax, ay);
    split(test, tx, ty);

    const double lo = std::max(*std::min_element(ax.begin(), ax.end()),
                               *std::min_element(tx.begin(), tx.end()));
    const double hi = std::min(*std::max_element(ax.begin(), ax.end()),
                               *std::max_element(tx.begin(), tx.end()));
    require(hi > lo, "bd_rate: psnr ranges do not overlap");

    const detail::Cubic fa = detail::fit_cubic(ax, ay);
    const detail::Cubic ft = detail::fit_cubic(tx, ty);
    const double avg_diff = (ft.integral(lo, hi) - fa.integral(lo, hi)) / (hi - lo);
    return (std::pow(10.0, avg_diff) - 1.0) * 100.0;
}

} // namespace raylf
