#include <catch2/catch_amalgamated.hpp>
#include <raylf/search.hpp>

#include <cmath>
#include <random>

using namespace raylf;

namespace {

LensletFrame random_lenslet(int px, int py, int ns, int nt, std::uint64_t seed) {
    LensletFrame f;
    f.grid = LensletGrid{px, py, ns, nt, 0, 0};
    f.image = Image8(px * ns, py * nt);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& v : f.image.data) v = (std::uint8_t)d(rng);
    return f;
}

LensletFrame smooth_lenslet(int px, int py, int ns, int nt, std::uint64_t seed) {
    // band-limited content so fractional phases are distinguishable but the
    // integer anchor still wins against its neighbors
    LensletFrame f;
    f.grid = LensletGrid{px, py, ns, nt, 0, 0};
    f.image = Image8(px * ns, py * nt);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, 6.28);
    const double p1 = ph(rng), p2 = ph(rng), p3 = ph(rng);
    for (int y = 0; y < f.image.height; ++y)
        for (int x = 0; x < f.image.width; ++x) {
            const double ks = double(x) / px, kt = double(y) / py;
            const double v = 128.0 + 50.0 * std::sin(0.9 * ks + p1) +
                             35.0 * std::sin(1.3 * kt + 0.7 * ks + p2) +
                             20.0 * std::sin(2.1 * kt + p3);
            f.image.at(x, y) = clamp_u8((int)std::lround(v));
        }
    return f;
}

// reference implementation: no early abort, same cost and tie-break rules
SearchResult brute_integer(const LensletFrame& cur, const BlockRect& b,
                           const LensletFrame& ref, const SearchConfig& cfg,
                           const ScaledMv& pred) {
    SearchResult best;
    bool have = false;
    for (int dkt = -cfg.window; dkt <= cfg.window; ++dkt)
        for (int dks = -cfg.window; dks <= cfg.window; ++dks) {
            long long sad = 0;
            for (int y = 0; y < b.h; ++y)
                for (int x = 0; x < b.w; ++x) {
                    const int d = int(cur.image.at(b.x + x, b.y + y)) -
                                  int(ref.image.at_clamped(b.x + x + dks * ref.grid.px,
                                                           b.y + y + dkt * ref.grid.py));
                    sad += d < 0 ? -d : d;
                }
            const double cost =
                double(sad) + cfg.lambda * detail::mv_rate_bits({4 * dks, 4 * dkt}, pred);
            bool better = false;
            if (!have) {
                better = true;
            } else if (cost != best.cost) {
                better = cost < best.cost;
            } else if (sad != best.sad) {
                better = sad < best.sad;
            } else {
                const int na = std::abs(dks) + std::abs(dkt);
                const int nb = std::abs(best.mv.dks) + std::abs(best.mv.dkt);
                if (na != nb)
                    better = na < nb;
                else if (dkt != best.mv.dkt)
                    better = dkt < best.mv.dkt;
                else
                    better = dks < best.mv.dks;
            }
            if (better) {
                best = SearchResult{RayMotionVector{dks, dkt, 0, 0}, sad, cost};
                have = true;
            }
        }
    return best;
}

}  // namespace

TEST_CASE("integer search with early abort matches a no-abort exhaustive reference") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dpos(0, 96 - 16);
    std::uniform_int_distribution<int> dpred(-20, 20);
    const double lambdas[] = {0.0, 1.25, 17.0, 433.0};
    for (int it = 0; it < 120; ++it) {
        const LensletFrame ref = random_lenslet(4, 4, 24, 24, 9000 + it);
        LensletFrame cur = random_lenslet(4, 4, 24, 24, 100000 + it);
        if (it % 3 == 0) {
            // correlated pair: cur is ref displaced by a known lattice step
            cur = ref;
            for (int y = 0; y < 96; ++y)
                for (int x = 0; x < 96; ++x)
                    cur.image.at(x, y) = ref.image.at_clamped(x + 8, y - 4);
        }
        SearchConfig cfg;
        cfg.window = 4;
        cfg.lambda = lambdas[it % 4];
        const ScaledMv pred{dpred(rng), dpred(rng)};
        const BlockRect b{dpos(rng), dpos(rng), 16, 16};

        const SearchResult got = search_integer(cur, b, ref, cfg, pred);
        const SearchResult want = brute_integer(cur, b, ref, cfg, pred);
        REQUIRE(got.mv == want.mv);
        REQUIRE(got.sad == want.sad);
        REQUIRE(got.cost == want.cost);
    }
}

TEST_CASE("a pure lattice displacement is recovered exactly with zero sad") {
    const LensletFrame ref = random_lenslet(8, 8, 16, 16, 5);
    LensletFrame cur = ref;
    const int dks = 2, dkt = -1;
    for (int y = 0; y < cur.image.height; ++y)
        for (int x = 0; x < cur.image.width; ++x)
            cur.image.at(x, y) = ref.image.at_clamped(x + dks * 8, y + dkt * 8);

    SearchConfig cfg;
    cfg.window = 4;
    const BlockRect b{40, 40, 16, 16};
    const SearchResult r = search_integer(cur, b, ref, cfg);
    CHECK(r.mv.dks == dks);
    CHECK(r.mv.dkt == dkt);
    CHECK(r.sad == 0);
}

TEST_CASE("fractional refinement recovers every phase pair reachable from the anchor") {
    const LensletFrame ref = smooth_lenslet(8, 8, 24, 24, 12);
    const BlockRect b{64, 64, 16, 16};
    SearchConfig cfg;
    cfg.window = 2;
    for (int aq = 0; aq < 4; ++aq)
        for (int bq = 0; bq < 4; ++bq) {
            const RayMotionVector truth{0, 0, aq, bq};
            const Image8 shifted = predict_fractional(ref, b, truth);
            LensletFrame cur = ref;
            for (int y = 0; y < b.h; ++y)
                for (int x = 0; x < b.w; ++x) cur.image.at(b.x + x, b.y + y) = shifted.at(x, y);

            SearchResult anchor;
            anchor.mv = RayMotionVector{0, 0, 0, 0};
            anchor.sad = block_sad(cur.image, b, predict_integer(ref, b, 0, 0));
            anchor.cost = double(anchor.sad);
            const SearchResult r = refine_fractional(cur, b, ref, anchor, cfg);
            REQUIRE(r.sad == 0);
            REQUIRE(r.mv == truth);
        }
}

TEST_CASE("the full two-stage search recovers quarter-step motion end to end") {
    // quarter phases keep the true position nearest its own anchor, so the
    // integer stage cannot land on the wrong side
    const LensletFrame ref = smooth_lenslet(8, 8, 24, 24, 31);
    SearchConfig cfg;
    cfg.window = 3;
    for (const auto& [dks, q] : {std::pair{1, 1}, std::pair{-1, 3}, std::pair{0, 1},
                                 std::pair{2, 3}, std::pair{-2, 0}}) {
        const BlockRect b{64, 72, 16, 16};
        const RayMotionVector truth{dks, 0, q, 0};
        const Image8 shifted = predict_fractional(ref, b, truth);
        LensletFrame cur = ref;
        for (int y = 0; y < b.h; ++y)
            for (int x = 0; x < b.w; ++x) cur.image.at(b.x + x, b.y + y) = shifted.at(x, y);

        const SearchResult base = search_integer(cur, b, ref, cfg);
        const SearchResult r = refine_fractional(cur, b, ref, base, cfg);
        REQUIRE(r.sad == 0);
        CHECK(quarter_position(r.mv.dks, r.mv.aq) == quarter_position(truth.dks, truth.aq));
        CHECK(quarter_position(r.mv.dkt, r.mv.bq) == 0);
    }
}

TEST_CASE("on flat content the tie-breaks pick the null vector") {
    LensletFrame flat;
    flat.grid = LensletGrid{4, 4, 24, 24, 0, 0};
    flat.image = Image8(96, 96);
    for (auto& v : flat.image.data) v = 77;
    SearchConfig cfg;
    cfg.window = 4;
    const SearchResult r = search_integer(flat, BlockRect{40, 40, 16, 16}, flat, cfg);
    CHECK(r.mv.dks == 0);
    CHECK(r.mv.dkt == 0);
    CHECK(r.sad == 0);
}

TEST_CASE("on flat content with a rate term the search follows the predictor") {
    LensletFrame flat;
    flat.grid = LensletGrid{4, 4, 24, 24, 0, 0};
    flat.image = Image8(96, 96);
    for (auto& v : flat.image.data) v = 200;
    SearchConfig cfg;
    cfg.window = 4;
    cfg.lambda = 10.0;
    const SearchResult r = search_integer(flat, BlockRect{40, 40, 16, 16}, flat, cfg,
                                          ScaledMv{8, -4});
    CHECK(r.mv.dks == 2);
    CHECK(r.mv.dkt == -1);
    CHECK(r.sad == 0);
}

TEST_CASE("with no rate weight the winner never has higher sad than the null vector") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> dpos(0, 96 - 16);
    for (int it = 0; it < 50; ++it) {
        const LensletFrame ref = random_lenslet(4, 4, 24, 24, 500 + it);
        const LensletFrame cur = random_lenslet(4, 4, 24, 24, 700 + it);
        const BlockRect b{dpos(rng), dpos(rng), 16, 16};
        SearchConfig cfg;
        cfg.window = 3;
        const SearchResult r = search_integer(cur, b, ref, cfg);
        const long long null_sad = block_sad(cur.image, b, predict_integer(ref, b, 0, 0));
        CHECK(r.sad <= null_sad);
    }
}

TEST_CASE("search results are deterministic") {
    const LensletFrame ref = random_lenslet(4, 4, 24, 24, 1);
    const LensletFrame cur = random_lenslet(4, 4, 24, 24, 2);
    SearchConfig cfg;
    cfg.window = 4;
    cfg.lambda = 3.5;
    const BlockRect b{32, 16, 16, 16};
    const SearchResult a = search_integer(cur, b, ref, cfg);
    const SearchResult b2 = search_integer(cur, b, ref, cfg);
    CHECK(a.mv == b2.mv);
    CHECK(a.sad == b2.sad);
    CHECK(a.cost == b2.cost);
    const SearchResult fa = refine_fractional(cur, b, ref, a, cfg);
    const SearchResult fb = refine_fractional(cur, b, ref, b2, cfg);
    CHECK(fa.mv == fb.mv);
}

TEST_CASE("half precision only visits half-step phases and quarter can only improve") {
    const LensletFrame ref = smooth_lenslet(8, 8, 24, 24, 66);
    const BlockRect b{80, 80, 16, 16};
    const Image8 shifted = predict_fractional(ref, b, RayMotionVector{0, 0, 1, 3});
    LensletFrame cur = ref;
    for (int y = 0; y < b.h; ++y)
        for (int x = 0; x < b.w; ++x) cur.image.at(b.x + x, b.y + y) = shifted.at(x, y);

    SearchResult anchor;
    anchor.mv = RayMotionVector{0, 0, 0, 0};
    anchor.sad = block_sad(cur.image, b, predict_integer(ref, b, 0, 0));
    anchor.cost = double(anchor.sad);

    SearchConfig half;
    half.precision = Precision::Half;
    const SearchResult rh = refine_fractional(cur, b, ref, anchor, half);
    CHECK(rh.mv.aq % 2 == 0);
    CHECK(rh.mv.bq % 2 == 0);

    SearchConfig quarter;
    const SearchResult rq = refine_fractional(cur, b, ref, anchor, quarter);
    CHECK(rq.cost <= rh.cost);
    CHECK(rq.sad == 0);

    SearchConfig integer;
    integer.precision = Precision::Integer;
    const SearchResult ri = refine_fractional(cur, b, ref, anchor, integer);
    CHECK(ri.mv == anchor.mv);
    CHECK(rh.sad <= ri.sad);
}

TEST_CASE("a one-pixel shift is representable conventionally but not on the ray lattice") {
    const LensletFrame ref = random_lenslet(8, 8, 16, 16, 44);
    LensletFrame cur = ref;
    for (int y = 0; y < cur.image.height; ++y)
        for (int x = 0; x < cur.image.width; ++x)
            cur.image.at(x, y) = ref.image.at_clamped(x + 1, y);

    const BlockRect b{48, 48, 16, 16};
    SearchConfig cfg;
    cfg.window = 1;

    const PixelSearchResult conv = full_search_conventional(cur, b, ref, cfg);
    CHECK(conv.sad == 0);
    CHECK(conv.mvx_q == 4);
    CHECK(conv.mvy_q == 0);

    const SearchResult base = search_integer(cur, b, ref, cfg);
    const SearchResult ray = refine_fractional(cur, b, ref, base, cfg);
    CHECK(ray.sad > 0);
}

TEST_CASE("searches near the frame corner use border replication and stay in range") {
    const LensletFrame ref = random_lenslet(4, 4, 8, 8, 13);
    const LensletFrame cur = random_lenslet(4, 4, 8, 8, 14);
    SearchConfig cfg;
    cfg.window = 8;
    const SearchResult r = search_integer(cur, BlockRect{0, 0, 16, 16}, ref, cfg);
    CHECK(std::abs(r.mv.dks) <= 8);
    CHECK(std::abs(r.mv.dkt) <= 8);
    CHECK_NOTHROW(refine_fractional(cur, BlockRect{0, 0, 16, 16}, ref, r, cfg));
    CHECK_NOTHROW(full_search_conventional(cur, BlockRect{16, 0, 16, 16}, ref, cfg));
}

TEST_CASE("mismatched lattices are rejected") {
    const LensletFrame a = random_lenslet(4, 4, 8, 8, 1);
    const LensletFrame b = random_lenslet(8, 8, 4, 4, 2);
    SearchConfig cfg;
    CHECK_THROWS_AS(search_integer(a, BlockRect{0, 0, 8, 8}, b, cfg), StructuralError);
}
