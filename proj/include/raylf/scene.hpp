#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "convert.hpp"
#include "optics.hpp"

namespace raylf {

struct Vec2 {
    double x = 0, y = 0;
};

// Full acquisition model: relay optics plus the main lens and the aperture
// sampling pitch between adjacent sub-aperture views.
struct CameraModel {
    OpticsConfig optics;
    double focal = 0;   // main lens focal length
    double u_step = 0;  // aperture spacing of adjacent views

    void validate() const {
        optics.validate();
        require(focal > 0, "camera: focal length must be positive");
        require(u_step > 0, "camera: aperture step must be positive");
        require(focal < optics.f_lens, "camera: focal must be < f_lens for a real conjugate");
    }
};

// Thin lens: 1/focal = 1/z + 1/z_img.
inline double image_distance(double focal, double z) {
    return 1.0 / (1.0 / focal - 1.0 / z);
}

// Object depth whose image lands exactly on the MLA plane.
inline double conjugate_depth(const CameraModel& cam) {
    return 1.0 / (1.0 / cam.focal - 1.0 / cam.optics.f_lens);
}

struct SineComponent {
    double fx = 0, fy = 0;  // cycles per unit length on the object plane
    double phase = 0;
    double amp = 0;
};

// Fronto-parallel textured plane. The texture is a sinusoid mixture defined
// on the whole plane, optionally windowed to a flat border so frame-edge
// content is static; the window translates with the plane.
struct PlanarScene {
    double depth = 0;
    double base = 128.0;
    std::vector<SineComponent> comps;

    bool windowed = false;
    double win_cx = 0, win_cy = 0;
    double win_half_x = 0, win_half_y = 0;  // full-amplitude half extents
    double win_taper = 0;                   // smoothstep band width

    double window(double x, double y) const {
        if (!windowed) return 1.0;
        auto w1 = [this](double d, double half) {
            d = std::abs(d);
            if (d <= half) return 1.0;
            if (d >= half + win_taper) return 0.0;
            const double t = (d - half) / win_taper;
            return 1.0 - t * t * (3.0 - 2.0 * t);
        };
        return w1(x - win_cx, win_half_x) * w1(y - win_cy, win_half_y);
    }

    double texture(double x, double y) const {
        double s = 0;
        for (const auto& c : comps)
            s += c.amp * std::sin(2.0 * std::numbers::pi_v<double> * (c.fx * x + c.fy * y) +
                                  c.phase);
        return base + window(x, y) * s;
    }

    void validate(const CameraModel& cam) const {
        require(depth > 0, "scene: depth must be positive");
        const double zi = image_distance(cam.focal, depth);
        require(zi > 0, "scene: plane inside the focal distance has no real image");
        require(zi <= cam.optics.f_lens, "scene: image point behind the MLA");
    }
};

// Object-plane coordinate seen by ray (u, s), one axis. Linear in both:
// O = c_u * u + c_s * s. The form I = u*(1-r) + s*r keeps the conjugate case
// (r == 1) exact so identical views stay bit-identical after quantization.
struct RayMap {
    double cu = 0, cs = 0;

    static RayMap make(const CameraModel& cam, double depth) {
        const double zi = image_distance(cam.focal, depth);
        const double r = zi / cam.optics.f_lens;
        const double m = -depth / zi;  // image -> object scaling
        return {m * (1.0 - r), m * r};
    }

    double object_coord(double u, double s) const { return cu * u + cs * s; }
};

// Continuous radiance of one ray; offset is the cumulative scene translation.
inline double sample_ray(const PlanarScene& sc, const CameraModel& cam,
                         const RayCoord& ray, Vec2 offset = {}) {
    const RayMap map = RayMap::make(cam, sc.depth);
    const double ox = map.object_coord(ray.u, ray.s) - offset.x;
    const double oy = map.object_coord(ray.v, ray.t) - offset.y;
    return sc.texture(ox, oy);
}

inline std::uint8_t quantize_radiance(double v) {
    return clamp_u8(static_cast<int>(std::floor(v + 0.5)));
}

// Aperture coordinate of view index i of au, centered on the optical axis.
inline double view_u(int i, int count, double u_step) {
    return (i - 0.5 * (count - 1)) * u_step;
}

inline LightField4D render_lf_frame(const PlanarScene& sc, const CameraModel& cam,
                                    const LensletGrid& grid, Vec2 offset = {}) {
    cam.validate();
    grid.validate();
    sc.validate(cam);

    const RayMap map = RayMap::make(cam, sc.depth);
    LightField4D lf;
    lf.au = grid.px;
    lf.av = grid.py;
    lf.views.assign(static_cast<std::size_t>(lf.au) * lf.av, Image8(grid.ns, grid.nt));

    for (int vj = 0; vj < lf.av; ++vj)
        for (int ui = 0; ui < lf.au; ++ui) {
            const double u = view_u(ui, lf.au, cam.u_step);
            const double v = view_u(vj, lf.av, cam.u_step);
            Image8& view = lf.view(ui, vj);
            for (int kt = 0; kt < grid.nt; ++kt) {
                const double oy = map.object_coord(v, kt * cam.optics.p_t) - offset.y;
                for (int ks = 0; ks < grid.ns; ++ks) {
                    const double ox = map.object_coord(u, ks * cam.optics.p_s) - offset.x;
                    view.at(ks, kt) = quantize_radiance(sc.texture(ox, oy));
                }
            }
        }
    return lf;
}

// True ray displacement on the st-plane between consecutive frames, read
// convention: frame t at (s, t) equals frame t-1 at (s + ds, t + dt).
struct GroundTruth {
    double ds = 0, dt = 0;
};

struct RenderedSequence {
    std::vector<LensletFrame> frames;
    std::vector<GroundTruth> truth;  // truth[0] == {0, 0}
};

// path[t] is the in-plane translation of frame t relative to frame t-1
// (path[0] is ignored). In-plane motion of dX shifts every ray uniformly by
// ds = dX * f_lens / depth, independent of the aperture coordinate.
inline RenderedSequence render_sequence(const PlanarScene& sc, const CameraModel& cam,
                                        const LensletGrid& grid,
                                        std::span<const Vec2> path) {
    require(!path.empty(), "render_sequence: empty path");
    RenderedSequence out;
    out.frames.reserve(path.size());
    out.truth.reserve(path.size());

    const double scale = cam.optics.f_lens / sc.depth;
    Vec2 cum{};
    for (std::size_t t = 0; t < path.size(); ++t) {
        if (t > 0) {
            cum.x += path[t].x;
            cum.y += path[t].y;
            out.truth.push_back({scale * path[t].x, scale * path[t].y});
        } else {
            out.truth.push_back({0, 0});
        }
        out.frames.push_back(multiview_to_lenslet(render_lf_frame(sc, cam, grid, cum)));
    }
    return out;
}

struct ScenePoint {
    double x = 0, y = 0, z = 0;
};

struct Motion3 {
    double dx = 0, dy = 0, dz = 0;
};

struct DisplacementReport {
    double ref_ds = 0, ref_dt = 0;       // displacement at the first uv sample
    double max_abs_dev = 0;              // worst |per-ray displacement - ref|
};

// st-plane crossing of the ray that leaves aperture point u toward the image
// of a world point at (x, z).
inline double st_crossing(const CameraModel& cam, double u, double x, double z) {
    const double zi = image_distance(cam.focal, z);
    const double ix = -(zi / z) * x;
    return u + (ix - u) * (cam.optics.f_lens / zi);
}

// Per-ray st displacement of a moving point, evaluated at each aperture
// sample. dz != 0 is allowed here as the diagnostic mode: the report then
// shows how far the constant-displacement model breaks.
inline DisplacementReport displacement_deviation(const CameraModel& cam,
                                                 const ScenePoint& p, const Motion3& m,
                                                 std::span<const Vec2> uv_samples) {
    cam.validate();
    require(!uv_samples.empty(), "displacement: no aperture samples");
    const double z1 = p.z + m.dz;
    for (double z : {p.z, z1}) {
        require(z > cam.focal, "displacement: point inside focal distance");
        const double zi = image_distance(cam.focal, z);
        require(zi <= cam.optics.f_lens, "displacement: image point behind the MLA");
    }

    DisplacementReport rep;
    bool first = true;
    for (const Vec2& uv : uv_samples) {
        // read convention: negate the physical motion of the image
        const double ds = -(st_crossing(cam, uv.x, p.x + m.dx, z1) -
                            st_crossing(cam, uv.x, p.x, p.z));
        const double dt = -(st_crossing(cam, uv.y, p.y + m.dy, z1) -
                            st_crossing(cam, uv.y, p.y, p.z));
        if (first) {
            rep.ref_ds = ds;
            rep.ref_dt = dt;
            first = false;
        }
        rep.max_abs_dev = std::max({rep.max_abs_dev, std::abs(ds - rep.ref_ds),
                                    std::abs(dt - rep.ref_dt)});
    }
    return rep;
}

// Strict form: in-plane motion only.
inline DisplacementReport verify_constant_displacement(const CameraModel& cam,
                                                       const ScenePoint& p,
                                                       double dx, double dy,
                                                       std::span<const Vec2> uv_samples) {
    return displacement_deviation(cam, p, Motion3{dx, dy, 0.0}, uv_samples);
}

struct SceneParams {
    std::uint64_t seed = 1;
    double depth = 0;
    int components = 12;
    double amp = 110.0;      // sum of component amplitudes
    double min_freq = 0.04;  // cycles per view sample
    double max_freq = 0.30;
    double tex_margin = 0;   // flat border inside the frame, view samples; 0 = none
    double tex_taper = 8;    // taper band, view samples
};

// Random band-limited texture sized to the camera/grid geometry.
inline PlanarScene make_planar_scene(const CameraModel& cam, const LensletGrid& grid,
                                     const SceneParams& p) {
    cam.validate();
    grid.validate();
    require(p.depth > 0, "scene params: depth required");
    require(p.components >= 1, "scene params: need at least one component");
    require(p.min_freq > 0 && p.max_freq >= p.min_freq, "scene params: bad frequency range");

    PlanarScene sc;
    sc.depth = p.depth;

    const RayMap map = RayMap::make(cam, p.depth);
    const double pitch_x = std::abs(map.cs) * cam.optics.p_s;  // object units per view sample
    const double pitch_y = std::abs(map.cs) * cam.optics.p_t;

    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> uangle(0.0, 2.0 * std::numbers::pi_v<double>);
    std::uniform_real_distribution<double> ufreq(p.min_freq, p.max_freq);
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * std::numbers::pi_v<double>);

    sc.comps.resize(p.components);
    for (auto& c : sc.comps) {
        const double ang = uangle(rng);
        const double f = ufreq(rng);
        c.fx = f * std::cos(ang) / pitch_x;
        c.fy = f * std::sin(ang) / pitch_y;
        c.phase = uphase(rng);
        c.amp = p.amp / p.components;
    }

    if (p.tex_margin > 0) {
        const double ox0 = map.object_coord(0, 0);
        const double ox1 = map.object_coord(0, (grid.ns - 1) * cam.optics.p_s);
        const double oy0 = map.object_coord(0, 0);
        const double oy1 = map.object_coord(0, (grid.nt - 1) * cam.optics.p_t);
        sc.windowed = true;
        sc.win_cx = 0.5 * (ox0 + ox1);
        sc.win_cy = 0.5 * (oy0 + oy1);
        sc.win_taper = p.tex_taper * pitch_x;
        sc.win_half_x =
            0.5 * std::abs(ox1 - ox0) - (p.tex_margin * pitch_x + sc.win_taper);
        sc.win_half_y =
            0.5 * std::abs(oy1 - oy0) - (p.tex_margin * pitch_y + sc.win_taper);
        require(sc.win_half_x > 0 && sc.win_half_y > 0,
                "scene params: margin leaves no textured area");
    }
    return sc;
}

} // namespace raylf
