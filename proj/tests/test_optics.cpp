#include <catch2/catch_amalgamated.hpp>
#include <raylf/optics.hpp>

#include <random>

using namespace raylf;
using Catch::Approx;

TEST_CASE("micro-image pitch is the microlens pitch scaled by one plus magnification") {
    OpticsConfig a{100.0, 1.0, 1.0, 1.0};
    const MicroImagePitch pa = micro_image_pitch(a);
    CHECK(pa.px == Approx(1.01).epsilon(1e-12));
    CHECK(pa.py == Approx(1.01).epsilon(1e-12));

    OpticsConfig b{50.0, 2.0, 0.1, 0.2};
    const MicroImagePitch pb = micro_image_pitch(b);
    CHECK(pb.px == Approx(0.104).epsilon(1e-12));
    CHECK(pb.py == Approx(0.208).epsilon(1e-12));
}

TEST_CASE("projection is exact on dyadic inputs") {
    // f_mu/f_lens = 1/128 and quarter-step coordinates are all dyadic,
    // so the projected position must be bit-exact, not approximately equal.
    OpticsConfig cfg{128.0, 1.0, 1.0, 1.0};
    const double f = cfg.magnification();
    REQUIRE(f == 1.0 / 128.0);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> qi(-4096, 4096);
    for (int it = 0; it < 20000; ++it) {
        const double u = qi(rng) / 4.0;
        const double v = qi(rng) / 4.0;
        const double s = qi(rng) / 4.0;
        const double t = qi(rng) / 4.0;
        const SensorPoint x = project_ray(cfg, RayCoord{u, v, s, t});
        CHECK(x.x == -f * u + (1.0 + f) * s);
        CHECK(x.y == -f * v + (1.0 + f) * t);
    }
}

TEST_CASE("projection is linear in both ray coordinates") {
    OpticsConfig cfg{128.0, 1.0, 1.0, 1.0};
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> qi(-1024, 1024);
    for (int it = 0; it < 5000; ++it) {
        const RayCoord a{qi(rng) / 4.0, qi(rng) / 4.0, qi(rng) / 4.0, qi(rng) / 4.0};
        const RayCoord b{qi(rng) / 4.0, qi(rng) / 4.0, qi(rng) / 4.0, qi(rng) / 4.0};
        const double k = qi(rng) / 512.0;  // dyadic scalar
        const RayCoord sum{a.u + b.u, a.v + b.v, a.s + b.s, a.t + b.t};
        const RayCoord scaled{k * a.u, k * a.v, k * a.s, k * a.t};

        const SensorPoint xa = project_ray(cfg, a);
        const SensorPoint xb = project_ray(cfg, b);
        const SensorPoint xsum = project_ray(cfg, sum);
        const SensorPoint xk = project_ray(cfg, scaled);
        CHECK(xsum.x == xa.x + xb.x);
        CHECK(xsum.y == xa.y + xb.y);
        CHECK(xk.x == k * xa.x);
        CHECK(xk.y == k * xa.y);
    }
}

TEST_CASE("a unit step in microlens index moves the projection by one micro-image pitch") {
    OpticsConfig cfg{50.0, 2.0, 0.1, 0.2};
    const MicroImagePitch p = micro_image_pitch(cfg);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> rd(-10.0, 10.0);
    for (int it = 0; it < 2000; ++it) {
        RayCoord r{rd(rng), rd(rng), rd(rng), rd(rng)};
        const SensorPoint x0 = project_ray(cfg, r);
        RayCoord r1 = r;
        r1.s += cfg.p_s;
        r1.t += cfg.p_t;
        const SensorPoint x1 = project_ray(cfg, r1);
        CHECK(x1.x - x0.x == Approx(p.px).margin(1e-12));
        CHECK(x1.y - x0.y == Approx(p.py).margin(1e-12));
    }
}

TEST_CASE("a unit step in view index moves the projection against the view direction") {
    OpticsConfig cfg{100.0, 1.0, 1.0, 1.0};
    const double f = cfg.magnification();
    RayCoord r{2.0, -3.0, 5.0, 7.0};
    const SensorPoint x0 = project_ray(cfg, r);
    r.u += 1.0;
    r.v += 1.0;
    const SensorPoint x1 = project_ray(cfg, r);
    CHECK(x1.x - x0.x == Approx(-f).margin(1e-15));
    CHECK(x1.y - x0.y == Approx(-f).margin(1e-15));
}

TEST_CASE("optics config validation rejects non-positive parameters") {
    CHECK_THROWS_AS((OpticsConfig{0.0, 1.0, 1.0, 1.0}.validate()), StructuralError);
    CHECK_THROWS_AS((OpticsConfig{100.0, 0.0, 1.0, 1.0}.validate()), StructuralError);
    CHECK_THROWS_AS((OpticsConfig{100.0, 1.0, 0.0, 1.0}.validate()), StructuralError);
    CHECK_THROWS_AS((OpticsConfig{100.0, 1.0, 1.0, -2.0}.validate()), StructuralError);
    CHECK_NOTHROW((OpticsConfig{100.0, 1.0, 1.0, 1.0}.validate()));
}
