#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curtainlab/hyperbolicity.hpp"
#include "curtainlab/scenario.hpp"

using namespace curtainlab;

namespace {

std::shared_ptr<const Geodesic> geo(const Space& sp, Point a, Point b) {
    return std::make_shared<Geodesic>(sp.geodesic(a, b));
}

} // namespace

TEST_CASE("tree four-point condition is exactly degenerate") {
    auto tr = make_tripod(10, 10, 10);
    Window w;
    DeltaReport rep = delta_scan(*tr, MetricKind::Ambient, w, 1500, 3);
    CHECK(rep.delta_est < 1e-9);
    CHECK(rep.quadruples == 1500);
}

TEST_CASE("plane ambient delta grows with the window, h2 stays put") {
    EuclideanPlane pl;
    HyperbolicPlane h2;
    auto run = [&](const Space& sp, double R) {
        Window w;
        w.radius = R;
        w.lateral = 5;
        return delta_scan(sp, MetricKind::Ambient, w, 1500, 5).delta_est;
    };
    double p10 = run(pl, 10), p20 = run(pl, 20), p40 = run(pl, 40);
    CHECK(p20 > p10);
    CHECK(p40 > p20);
    CHECK(p40 > 1.8 * p10); // roughly linear growth
    double h10 = run(h2, 10), h20 = run(h2, 20), h40 = run(h2, 40);
    CHECK(h20 <= 2 * h10);
    CHECK(h40 <= 2 * h10);
}

TEST_CASE("plane dhat distances collapse, so dhat delta stays bounded") {
    SpaceHandle h = make_space("plane", "{}");
    for (double R : {10.0, 20.0}) {
        CurtainPool pool = make_preset_pool(h, 0.5, 20000, R, 16);
        SeparationContext ctx(pool);
        Window w;
        w.radius = R;
        DeltaReport rep = delta_scan(*h.space, MetricKind::Dhat, w, 60, 7, &ctx, 1, 16);
        CHECK(rep.delta_est <= 1.0);
        CHECK(rep.pool_id == pool.id());
    }
}

TEST_CASE("grid search: plane grids grow with the window") {
    EuclideanPlane pl;
    SampleBudget budget;
    for (double R : {10.0, 20.0}) {
        auto H = geo(pl, pl.make(-R, 0), pl.make(R, 0));
        auto K = geo(pl, pl.make(0, -R), pl.make(0, R));
        auto grids = grid_search(pl, {H}, {K}, budget);
        REQUIRE(!grids.empty());
        // perpendicular pencils cross everywhere: the full chains survive
        CHECK(grids.front().thinness == (int)std::ceil(2 * R) - 1);
        CHECK(grids.front().thinness >= (int)std::floor(R) - 2);
    }
}

TEST_CASE("grid search: hyperbolic and tree grids stay thin") {
    HyperbolicPlane h2;
    SampleBudget budget;
    for (double R : {10.0, 20.0, 40.0}) {
        auto axis = std::make_shared<Geodesic>(h2.axis_ray(R));
        std::vector<std::shared_ptr<const Geodesic>> perps;
        for (double u : {R / 4, R / 2, 3 * R / 4})
            perps.push_back(std::make_shared<Geodesic>(h2.perpendicular_at(u, R)));
        auto grids = grid_search(h2, {axis}, perps, budget);
        int best = grids.empty() ? 0 : grids.front().thinness;
        CHECK(best <= 3);
    }
    auto tr = make_tripod(12, 12, 12);
    auto ab = geo(*tr, tr->edge_point(0, 12), tr->edge_point(1, 12));
    auto ac = geo(*tr, tr->edge_point(0, 12), tr->edge_point(2, 12));
    auto grids = grid_search(*tr, {ab}, {ac}, budget);
    int best = grids.empty() ? 0 : grids.front().thinness;
    CHECK(best <= 1);
}

TEST_CASE("qi_sanity arithmetic and the integer-distance lower side") {
    SpaceHandle h = make_space("plane", "{}");
    const auto& pl = static_cast<const EuclideanPlane&>(*h.space);
    CurtainPool pool = make_preset_pool(h, 0.1, 20000, 12, 4);
    SeparationContext ctx(pool);

    Point x = pl.make(0, 0), y = pl.make(4, 0);
    QiReport rep = qi_sanity(ctx, x, y, 2);
    CHECK(rep.lower_ok); // d integer, so d_E <= d is forced
    CHECK(rep.upper_rhs == doctest::Approx(rep.d_E_lower * 4 + 4));
    CHECK(rep.upper_ok);

    QiReport same = qi_sanity(ctx, x, x, 2);
    CHECK(same.d == 0.0);
    CHECK(same.d_E_lower == 0.0);
    CHECK(same.lower_ok);

    // spec arithmetic: d_E_lower = 3 with E = 2 caps d at 16
    CHECK(3.0 * (2 + 2) + (2 + 2) == 16.0);
}

TEST_CASE("qi_sanity on tripod pairs across the branch with E = 1") {
    SpaceHandle h = make_space("tripod", "{\"leg_a\":10,\"leg_b\":10,\"leg_c\":10}");
    const auto& tr = static_cast<const MetricTree&>(*h.space);
    CurtainPool pool = make_preset_pool(h, 0.5, 20000, 20, 4);
    SeparationContext ctx(pool);
    Point a = tr.edge_point(0, 10), b = tr.edge_point(1, 10);
    QiReport rep = qi_sanity(ctx, a, b, 1);
    CHECK(rep.d == doctest::Approx(20.0));
    CHECK(rep.lower_ok);
    CHECK(rep.upper_ok); // 20 <= d_E_lower * 3 + 3 needs d_E_lower >= 6
    CHECK(rep.d_E_lower >= 6.0);
}
