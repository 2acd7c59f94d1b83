#pragma once

#include "error.hpp"

namespace raylf {

// Ray in two-plane parameterization: (u, v) on the main lens aperture,
// (s, t) on the microlens array. All four are lengths in the same unit.
struct RayCoord {
    double u = 0, v = 0, s = 0, t = 0;
};

struct SensorPoint {
    double x = 0, y = 0;
};

struct MicroImagePitch {
    double px = 0, py = 0;
};

// Plenoptic relay geometry. f_lens is the aperture-to-MLA separation,
// f_mu the MLA-to-sensor separation, (p_s, p_t) the microlens pitch.
struct OpticsConfig {
    double f_lens = 0;
    double f_mu = 0;
    double p_s = 0;
    double p_t = 0;

    double magnification() const { return f_mu / f_lens; }

    void validate() const {
        require(f_lens > 0, "optics: f_lens must be positive");
        require(f_mu > 0, "optics: f_mu must be positive");
        require(p_s > 0 && p_t > 0, "optics: microlens pitch must be positive");
    }
};

// Where the ray lands on the sensor. The map is linear in (u, v, s, t).
inline SensorPoint project_ray(const OpticsConfig& o, const RayCoord& r) {
    const double f = o.magnification();
    return {-f * r.u + (1.0 + f) * r.s, -f * r.v + (1.0 + f) * r.t};
}

// Sensor-plane spacing between neighboring micro-image centers. A unit step
// of the microlens index moves the projection by (1 + f_mu/f_lens) * pitch.
inline MicroImagePitch micro_image_pitch(const OpticsConfig& o) {
    o.validate();
    const double f = o.magnification();
    return {(1.0 + f) * o.p_s, (1.0 + f) * o.p_t};
}

} // namespace raylf
