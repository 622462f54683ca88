#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "curtainlab/separation.hpp"

using namespace curtainlab;

namespace {

EuclideanPlane& plane() {
    static EuclideanPlane p;
    return p;
}

std::shared_ptr<const Geodesic> seg(const Space& sp, Point a, Point b) {
    return std::make_shared<Geodesic>(sp.geodesic(a, b));
}

std::shared_ptr<const Geodesic> xseg(double x0, double x1, double y = 0) {
    return seg(plane(), plane().make(x0, y), plane().make(x1, y));
}

const double kZeta3 = 1.2020569031595943;

} // namespace

TEST_CASE("pool construction keeps poles inside probes") {
    auto probe = xseg(0, 20);
    CurtainPool pool = build_pool(plane(), {probe}, 0.5);
    CHECK(pool.size() > 30);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        Curtain c = pool.curtain(i);
        CHECK(c.pole_lo() > 0);
        CHECK(c.pole_hi() < probe->length);
    }
    CHECK_THROWS_AS(build_pool(plane(), {probe}, 0.5, 10), Error);
}

TEST_CASE("pool file round-trips bit-exactly") {
    auto probe = xseg(0, 20);
    auto vertical = seg(plane(), plane().make(10, -8), plane().make(10, 8));
    CurtainPool pool = build_pool(plane(), {probe, vertical}, 0.5);
    std::string path = "pool_roundtrip.bin";
    save_pool(pool, path);
    CurtainPool loaded = load_pool(plane(), {probe, vertical}, path);
    CHECK(loaded.size() == pool.size());
    CHECK(loaded.id() == pool.id());
    std::string path2 = "pool_roundtrip2.bin";
    save_pool(loaded, path2);
    std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
    std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("figure-2 band: the two verticals are exactly 4-separated in the pool") {
    Fig2Model model;
    auto space = make_figure2_space(model);
    CurtainPool pool = build_fig2_pool(*space, model, 0.25);
    SeparationContext ctx(pool);
    double yc = 0.5 * (model.band_y0 + model.band_y1);
    auto b = seg(*space, space->make(0.5, yc), space->make(model.width - 0.5, yc));
    double x_h = model.bridge_x0 + 1.5, x_k = model.bridge_x1 - 1.5;
    Curtain h(b, x_h - 0.5), k(b, x_k - 0.5);
    WitnessResult w = separation_witness(ctx, h, k);
    CHECK(w.n == 4);
    CHECK(is_chain(w.chain, ctx.budget()).valid);
}

TEST_CASE("tripod: opposite-side curtains have witness at most 1") {
    auto tr = make_tripod(10, 10, 10);
    auto ab = seg(*tr, tr->edge_point(0, 10), tr->edge_point(1, 10));
    auto ac = seg(*tr, tr->edge_point(0, 10), tr->edge_point(2, 10));
    auto bc = seg(*tr, tr->edge_point(1, 10), tr->edge_point(2, 10));
    CurtainPool pool = build_pool(*tr, {ab, ac, bc}, 0.5);
    SeparationContext ctx(pool);
    Curtain h(ab, 5.0), k(ab, 15.0); // opposite sides of the branch point
    WitnessResult w = separation_witness(ctx, h, k);
    CHECK(w.n <= 1);
}

TEST_CASE("longest_Lchain basics") {
    auto probe = xseg(-2, 12);
    CurtainPool pool = build_pool(plane(), {probe}, 0.1);
    SeparationContext ctx(pool);
    Point x = plane().make(0, 0), y = plane().make(10, 0);

    SUBCASE("identical points give the exact zero") {
        LongestChainResult r = longest_Lchain(ctx, x, x, 3);
        CHECK(r.est.value == 0.0);
        CHECK(r.est.bound == BoundKind::Exact);
    }

    SUBCASE("x-axis-only pool realizes ceil(d) at any L") {
        for (int L : {1, 4, 16}) {
            LongestChainResult r = longest_Lchain(ctx, x, y, L);
            CHECK(r.est.value == doctest::Approx(10.0)); // = ceil(d), and < 1 + d
            CHECK(r.est.bound == BoundKind::Lower);
            CHECK(is_chain(r.chain, ctx.budget()).valid);
            CHECK(r.note.find("pool") != std::string::npos);
        }
    }

    SUBCASE("empty candidate set returns value 1") {
        Point close_y = plane().make(0.8, 0);
        LongestChainResult r = longest_Lchain(ctx, x, close_y, 2);
        CHECK(r.est.value == 1.0);
    }
}

TEST_CASE("witness chains collapse d_L in a flat window") {
    // vertical probe tall enough to refute separation below L = 12
    auto probe = xseg(-2, 12);
    auto vertical = seg(plane(), plane().make(5, -7), plane().make(5, 7));
    CurtainPool pool = build_pool(plane(), {probe, vertical}, 0.5);
    SeparationContext ctx(pool);
    Point x = plane().make(0, 0), y = plane().make(10, 0);
    Curtain h(probe, 4.0), k(probe, 7.0);
    WitnessResult w = separation_witness(ctx, h, k);
    CHECK(w.n >= 8); // horizontal slabs across the window
    LongestChainResult small = longest_Lchain(ctx, x, y, 2);
    CHECK(small.est.value <= 2.0); // chains cannot pass the witness filter
    LongestChainResult big = longest_Lchain(ctx, x, y, w.n);
    CHECK(big.est.value >= 6.0);
}

TEST_CASE("monotonicity in L and in the pool") {
    auto probe = xseg(-2, 12);
    auto vertical = seg(plane(), plane().make(5, -4), plane().make(5, 4));
    CurtainPool pool = build_pool(plane(), {probe, vertical}, 0.5);
    SeparationContext ctx(pool);
    Point x = plane().make(0, 0), y = plane().make(10, 0);
    double prev = 0;
    for (int L = 1; L <= 10; ++L) {
        double v = longest_Lchain(ctx, x, y, L).est.value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    // enlarging the pool never decreases a Lower estimate
    auto probe2 = xseg(-2, 12, 0.25);
    CurtainPool bigger = build_pool(plane(), {probe, vertical, probe2}, 0.5);
    SeparationContext ctx2(bigger);
    for (int L : {1, 3, 9}) {
        CHECK(longest_Lchain(ctx2, x, y, L).est.value + 1e-12 >=
              longest_Lchain(ctx, x, y, L).est.value);
    }
}

TEST_CASE("d_L cap: value stays below 1 + d") {
    auto probe = xseg(-2, 30);
    auto vertical = seg(plane(), plane().make(9, -4), plane().make(9, 4));
    CurtainPool pool = build_pool(plane(), {probe, vertical}, 0.3);
    SeparationContext ctx(pool);
    Rng rng(4);
    for (int i = 0; i < 25; ++i) {
        double a = rng.uniform(0, 10), b = rng.uniform(12, 26);
        Point x = plane().make(a, 0), y = plane().make(b, 0);
        for (int L : {1, 5, 40}) {
            double v = longest_Lchain(ctx, x, y, L).est.value;
            CHECK(v < 1.0 + plane().dist(x, y) + 1e-9);
        }
    }
}

TEST_CASE("dhat bounds and the distance-one cap") {
    auto probe = xseg(-2, 12);
    CurtainPool pool = build_pool(plane(), {probe}, 0.25);
    SeparationContext ctx(pool);
    Point x = plane().make(0, 0);

    DhatResult same = dhat(ctx, x, x, 16);
    CHECK(same.lower.value == 0.0);
    CHECK(same.upper.value == 0.0);

    Point y = plane().make(1, 0);
    DhatResult d1 = dhat(ctx, x, y, 64);
    CHECK(d1.lower.value >= 0.0);
    CHECK(d1.lower.value <= d1.upper.value);
    // d_L <= 2 for all L when d = 1, so the upper bound sits near 2 zeta(3)
    CHECK(d1.upper.value <= 2 * kZeta3 + 0.01);
    CHECK(d1.upper.tail > 0.0);
    CHECK(d1.upper.tail <= (1.0 + 1.0) * 0.5 / (64.0 * 64.0) + 1e-15);

    // lower <= upper on generic pairs too
    Point z = plane().make(7.3, 0);
    DhatResult dz = dhat(ctx, x, z, 32);
    CHECK(dz.lower.value <= dz.upper.value);
}

TEST_CASE("gromov product collapses algebraically at the basepoint") {
    auto probe = xseg(-2, 12);
    CurtainPool pool = build_pool(plane(), {probe}, 0.25);
    SeparationContext ctx(pool);
    Point o = plane().make(0, 0), x = plane().make(9, 0);
    GromovInterval at_o = gromov_product(ctx, x, o, o, 16);
    CHECK(at_o.lo == 0.0);
    CHECK(at_o.hi == 0.0);
    GromovInterval same = gromov_product(ctx, x, x, o, 16);
    DhatResult dox = dhat(ctx, o, x, 16);
    CHECK(same.lo == doctest::Approx(dox.lower.value));
    CHECK(same.hi == doctest::Approx(dox.upper.value));
}

TEST_CASE("backtrack bound") {
    CHECK(backtrack_bound(4) == 3);
    CHECK(backtrack_bound(0) == 1);
    CHECK(backtrack_bound(7) == 4);
    CHECK_THROWS_AS(backtrack_bound(-1), Error);
}

TEST_CASE("glue_chains arithmetic and validation") {
    auto base = xseg(0, 40);
    CurtainPool pool = build_pool(plane(), {base}, 0.5);
    SeparationContext ctx(pool);
    auto mk = [&](double start, int count, double step) {
        Chain c;
        c.cert = ChainCert::CommonBase;
        for (int i = 0; i < count; ++i) c.curtains.emplace_back(base, start + i * step);
        return c;
    };
    SUBCASE("n=5, m=10, L=3 gives cardinality 10") {
        Chain c = mk(1.0, 5, 1.2);
        Chain cp = mk(12.0, 10, 1.2);
        Chain glued = glue_chains(ctx, c, cp, 3);
        CHECK(glued.size() == 10);
        CHECK(is_chain(glued, ctx.budget()).valid);
    }
    SUBCASE("minimal legal sizes: n=2, m=L+2") {
        int L = 3;
        Chain c = mk(1.0, 2, 1.2);
        Chain cp = mk(10.0, L + 2, 1.2);
        Chain glued = glue_chains(ctx, c, cp, L);
        CHECK(glued.size() == 2);
    }
    SUBCASE("preconditions") {
        Chain c = mk(1.0, 1, 1.2);
        Chain cp = mk(10.0, 6, 1.2);
        CHECK_THROWS_AS(glue_chains(ctx, c, cp, 3), Error);
        Chain c2 = mk(1.0, 3, 1.2);
        Chain cp2 = mk(10.0, 4, 1.2);
        CHECK_THROWS_AS(glue_chains(ctx, c2, cp2, 3), Error); // m = L+1 not > L+1
    }
    SUBCASE("unverifiable hypothesis is reported") {
        // reversed order: h'_1^- points away from c, so c misses it
        Chain c = mk(20.0, 5, 1.2);
        Chain cp = mk(1.0, 10, 1.2);
        bool threw = false;
        try {
            glue_chains(ctx, c, cp, 3);
        } catch (const Error& e) {
            threw = true;
            CHECK(e.code() == ErrorCode::HypothesisUnverified);
        }
        CHECK(threw);
    }
}

TEST_CASE("dualize_chain places duals at group midpoints") {
    auto line = xseg(-5, 25);
    CurtainPool pool = build_pool(plane(), {line}, 0.5);
    SeparationContext ctx(pool);
    Point x = plane().make(0, 0), y = plane().make(20, 0);
    auto mk_sep = [&](int count, double step) {
        Chain c;
        for (int i = 0; i < count; ++i) c.curtains.emplace_back(line, 6.0 + i * step);
        return c;
    };
    SUBCASE("L=1, n=1 needs 14 curtains and yields 2 duals") {
        Chain c = mk_sep(14, 1.05);
        Chain duals = dualize_chain(ctx, c, x, y, 1, 1);
        CHECK(duals.size() == 2);
        CHECK(is_chain(duals, ctx.budget()).valid);
        for (const Curtain& du : duals.curtains) {
            CHECK(side(du, x) == Side::Minus);
            CHECK(side(du, y) == Side::Plus);
        }
        CHECK(duals.note.find("unrefuted") != std::string::npos);
    }
    SUBCASE("insufficient length is an error") {
        Chain c = mk_sep(12, 1.05);
        CHECK_THROWS_AS(dualize_chain(ctx, c, x, y, 1, 1), Error);
    }
    SUBCASE("n = 0 is rejected") {
        Chain c = mk_sep(14, 1.05);
        CHECK_THROWS_AS(dualize_chain(ctx, c, x, y, 1, 0), Error);
    }
}

TEST_CASE("reverse triangle per-L on collinear plane triples") {
    auto probe = xseg(-2, 40);
    auto vertical = seg(plane(), plane().make(15, -6), plane().make(15, 6));
    CurtainPool pool = build_pool(plane(), {probe, vertical}, 0.5);
    SeparationContext ctx(pool);
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
        double a = rng.uniform(0, 8), b = rng.uniform(12, 20), c = rng.uniform(24, 36);
        Point x = plane().make(a, 0), y = plane().make(b, 0), z = plane().make(c, 0);
        for (int L : {1, 2, 4, 8, 16}) {
            double xz = longest_Lchain(ctx, x, z, L).est.value;
            double xy = longest_Lchain(ctx, x, y, L).est.value;
            double yz = longest_Lchain(ctx, y, z, L).est.value;
            CHECK(xz >= xy + yz - 1.5 * L - 5 - 1e-9);
        }
    }
}

TEST_CASE("strip axis pool uses the analytic witness family") {
    auto strip = StripSpace::example51(4, 16);
    CurtainPool pool = build_strip_axis_pool(*strip, 0.5, 20.0);
    SeparationContext ctx(pool);
    auto axis = pool.probes[0];
    // straddling valley 2 at x = 4: analytic count ceil(sqrt(3.5)) = 2
    Curtain h(axis, 3.0), k(axis, 5.0);
    WitnessResult w = separation_witness(ctx, h, k);
    CHECK(w.n == 2);
    CHECK(is_chain(w.chain, ctx.budget()).valid);
    // same-column pair sees the truncation height
    Curtain h2_(axis, 5.0), k2(axis, 7.0);
    CHECK(separation_witness(ctx, h2_, k2).n == (int)strip->model().H - 1);
}
