#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "curtainlab/morse.hpp"
#include "curtainlab/scenario.hpp"

using namespace curtainlab;

namespace {

EuclideanPlane& plane() {
    static EuclideanPlane p;
    return p;
}
HyperbolicPlane& h2() {
    static HyperbolicPlane h;
    return h;
}

std::shared_ptr<const Geodesic> geo(const Space& sp, Point a, Point b) {
    return std::make_shared<Geodesic>(sp.geodesic(a, b));
}

} // namespace

TEST_CASE("sublinear families: values, monotonicity, concavity flags") {
    SublinearFn c2 = SublinearFn::constant(2);
    CHECK(c2(0) == 2.0);
    CHECK(c2(1e5) == 2.0);
    CHECK(c2.kappa4_sublinear());

    SublinearFn lg = SublinearFn::log_pow(1);
    CHECK(lg(0) == doctest::Approx(1.0));
    CHECK(lg(std::exp(1.0) - 1) == doctest::Approx(2.0));
    CHECK(lg.kappa4_sublinear());

    SublinearFn sq = SublinearFn::power(0.5);
    CHECK(sq(3) == doctest::Approx(2.0));
    CHECK_FALSE(sq.kappa4_sublinear()); // 4a = 2 is not sublinear
    CHECK(SublinearFn::power(0.2).kappa4_sublinear());

    CHECK(SublinearFn::parse("sqrt").param() == doctest::Approx(0.5));
    CHECK(SublinearFn::parse("const:3").family() == KappaFamily::Const);

    // sampled monotone + concave across the catalogue
    for (auto k : {c2, lg, sq}) {
        double prev = 0, prev_inc = 1e300;
        for (double t = 0; t <= 200; t += 5) {
            double v = k(t);
            CHECK(v >= 1.0);
            CHECK(v >= prev - 1e-12);
            if (t > 0) {
                double inc = v - prev;
                CHECK(inc <= prev_inc + 1e-9);
                prev_inc = inc;
            }
            prev = v;
        }
    }
}

TEST_CASE("invalid kappa parameters are rejected") {
    CHECK_THROWS_AS(SublinearFn::constant(0.5), Error);
    CHECK_THROWS_AS(SublinearFn::power(1.0), Error);
    CHECK_THROWS_AS(SublinearFn::power(0.9), Error);  // fails the t=1e6 spot check
    CHECK_THROWS_AS(SublinearFn::log_pow(3.0), Error); // not concave near 0
}

TEST_CASE("kappa-chain stations: constant kappa gives an arithmetic progression") {
    auto line = geo(plane(), plane().make(0, 0), plane().make(120, 0));
    CurtainPool pool = build_pool(plane(), {line}, 0.5);
    SeparationContext ctx(pool);
    SublinearFn one = SublinearFn::constant(1);
    KappaChain kc = build_kappa_chain(ctx, line, one, 1.0);
    REQUIRE(kc.elems.size() >= 3);
    for (std::size_t i = 0; i < kc.elems.size(); ++i)
        CHECK(kc.elems[i].t == doctest::Approx(10.0 * (i + 1)).epsilon(1e-9));
    CHECK(kc.spacing_ok(1e-6));
    CHECK(kc.C == doctest::Approx(10.0));
}

TEST_CASE("kappa-chain root: t = 10 sqrt(1+t) against the quadratic oracle") {
    // oracle: t^2 - 100 t - 100 = 0, positive root 50 + sqrt(2600)
    double expected = 50.0 + std::sqrt(2600.0);
    auto line = geo(plane(), plane().make(0, 0), plane().make(500, 0));
    CurtainPool pool = build_pool(plane(), {line}, 2.0);
    SeparationContext ctx(pool);
    KappaChain kc = build_kappa_chain(ctx, line, SublinearFn::power(0.5), 1.0);
    REQUIRE(kc.elems.size() >= 1);
    CHECK(kc.elems[0].t == doctest::Approx(expected).epsilon(1e-9));
    CHECK(kc.spacing_ok(1e-6));
}

TEST_CASE("plane witness ball: projected diameter matches planar geometry") {
    auto line = geo(plane(), plane().make(-150, 0), plane().make(150, 0));
    MorseBudget budget;
    double R = 30;
    double diam = projected_ball_diameter(*line, plane().make(0, R), R - 1, budget, 7);
    // oracle: the disk B((0,R), R-1) spans x in [-(R-1), R-1]
    CHECK(diam >= 2 * (R - 1) * 0.99);
    CHECK(diam <= 2 * (R - 1) + 1e-9);
}

TEST_CASE("contraction: hyperbolic axis bounded, plane line grows with the window") {
    MorseBudget budget;
    budget.n_centers = 40;
    SublinearFn one = SublinearFn::constant(1);

    auto axis = std::make_shared<Geodesic>(h2().axis_ray(120));
    Window wh;
    wh.radius = 120;
    wh.lateral = 5;
    ContractionReport hrep = estimate_contraction(*axis, one, budget, wh);
    CHECK(hrep.D_est > 0.1);
    CHECK(hrep.D_est <= 10.0);
    for (const auto& s : hrep.samples) CHECK(s.dist_ray > s.radius + 1e-9);

    auto line = geo(plane(), plane().make(-150, 0), plane().make(150, 0));
    Window w1, w2;
    w1.radius = 20;
    w2.radius = 60;
    double d1 = estimate_contraction(*line, one, budget, w1).D_est;
    double d2 = estimate_contraction(*line, one, budget, w2).D_est;
    CHECK(d2 > d1 * 1.5); // flats are not contracting
    CHECK_THROWS_AS(
        (void)estimate_contraction(*geo(plane(), plane().make(0, 0), plane().make(50, 0)), one,
                                   budget, w1),
        Error); // ray too short
}

TEST_CASE("slim test: trees are exactly slim, plane ratios grow") {
    MorseBudget budget;
    auto tr = make_tripod(120, 120, 120);
    auto ray = geo(*tr, tr->vertex_point(0), tr->edge_point(0, 120));
    Window w;
    SlimReport rep = kappa_slim_test(*ray, SublinearFn::constant(1), budget, w);
    CHECK(rep.C_est <= 1e-7); // projections lie on [x, y] in a tree

    auto line = geo(plane(), plane().make(-150, 0), plane().make(150, 0));
    Window small, big;
    small.radius = 15;
    big.radius = 80;
    double c_small = kappa_slim_test(*line, SublinearFn::constant(1), budget, small).C_est;
    double c_big = kappa_slim_test(*line, SublinearFn::constant(1), budget, big).C_est;
    CHECK(c_big > c_small);

    auto axis = std::make_shared<Geodesic>(h2().axis_ray(120));
    Window wh;
    wh.radius = 120;
    wh.lateral = 5;
    SlimReport hs = kappa_slim_test(*axis, SublinearFn::constant(1), budget, wh);
    CHECK(hs.C_est <= 5.0); // thin triangles keep the axis slim
}

TEST_CASE("excursion round trip on the hyperbolic axis") {
    SpaceHandle h = make_space("h2", "{}");
    const auto& hsp = static_cast<const HyperbolicPlane&>(*h.space);
    auto ray = std::make_shared<Geodesic>(hsp.axis_ray(200));
    MorseBudget budget;
    budget.n_centers = 30;
    Window w;
    w.radius = 200;
    w.lateral = 5;
    ContractionReport cr = estimate_contraction(*ray, SublinearFn::constant(1), budget, w);
    CurtainPool pool = make_preset_pool(h, 0.51, 20000, 200, 16);
    SeparationContext ctx(pool);
    KappaChain kc = build_kappa_chain(ctx, ray, SublinearFn::constant(1), cr.D_est);
    CHECK(kc.spacing_ok(1e-6));
    CHECK(kc.separation_ok());
    for (std::size_t i = 0; i + 1 < kc.elems.size(); ++i)
        CHECK(kc.elems[i].witness_n <= kc.elems[i].target);
    ExcursionReport er = verify_excursion_implies_contracting(kc, budget, w);
    CHECK(er.slim_C_est <= 5.0 * kc.C);
    CHECK(er.violations == 0);
}

TEST_CASE("plane kappa-chain fails separation evidence in a flat window") {
    // a tall vertical probe supplies witness chains that refute separation
    auto line = geo(plane(), plane().make(0, 0), plane().make(200, 0));
    auto tall = geo(plane(), plane().make(50, -90), plane().make(50, 90));
    CurtainPool pool = build_pool(plane(), {line, tall}, 0.5);
    SeparationContext ctx(pool);
    KappaChain kc = build_kappa_chain(ctx, line, SublinearFn::constant(1), 1.0);
    CHECK(kc.spacing_ok(1e-6));
    CHECK_FALSE(kc.separation_ok()); // flats are not 10-separated at scale 90
}

TEST_CASE("persistent shadow: flat collapses, error paths") {
    SpaceHandle h = make_space("plane", "{}");
    const auto& pl = static_cast<const EuclideanPlane&>(*h.space);
    auto ray = geo(pl, pl.make(0, 0), pl.make(200, 0));
    CurtainPool pool = make_preset_pool(h, 0.51, 20000, 200, 64);
    SeparationContext ctx(pool);
    SublinearFn one = SublinearFn::constant(1);
    ShadowReport rep = persistent_shadow_test(ctx, *ray, one.pow_fn(1), 64, 5.0, 48);
    CHECK(rep.constrained > 0);
    CHECK(rep.C_fit < 0.01); // vertical witnesses refute every L <= 64

    auto short_ray = geo(pl, pl.make(0, 0), pl.make(50, 0));
    CHECK_THROWS_AS((void)persistent_shadow_test(ctx, *short_ray, one.pow_fn(1), 16, 5.0, 8),
                    Error);
}

TEST_CASE("kappa-chain serialization writes one record per element") {
    auto line = geo(plane(), plane().make(0, 0), plane().make(120, 0));
    CurtainPool pool = build_pool(plane(), {line}, 0.5);
    SeparationContext ctx(pool);
    KappaChain kc = build_kappa_chain(ctx, line, SublinearFn::constant(1), 1.0);
    std::string path = "kchain_test.csv";
    save_kappa_chain(kc, path);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "i,t_i,witness_n,target_bound,pool_id,kappa,C");
    int lines = 0;
    std::string line_s;
    while (std::getline(f, line_s)) ++lines;
    CHECK(lines == (int)kc.elems.size());
    (void)std::remove(path.c_str());
}
