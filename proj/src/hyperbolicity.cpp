#include "curtainlab/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>

#include "curtainlab/rng.hpp"

namespace curtainlab {

std::string metric_kind_name(MetricKind k) {
    switch (k) {
        case MetricKind::Ambient: return "ambient";
        case MetricKind::DL: return "d_L";
        case MetricKind::Dhat: return "dhat";
    }
    return "?";
}

DeltaReport delta_scan(const Space& space, MetricKind kind, const Window& window,
                       int n_quadruples, std::uint64_t seed, SeparationContext* ctx, int L,
                       int L_max) {
    if (kind != MetricKind::Ambient && !ctx)
        throw Error(ErrorCode::BadInput, "pool context required for d_L / dhat scans");
    DeltaReport rep;
    rep.kind = kind;
    rep.L = (kind == MetricKind::DL) ? L : 0;
    rep.window = window.radius;
    rep.quadruples = n_quadruples;
    rep.seed = seed;
    if (ctx) rep.pool_id = ctx->pool().id();

    auto dist = [&](const Point& a, const Point& b) -> double {
        switch (kind) {
            case MetricKind::Ambient: return space.dist(a, b);
            case MetricKind::DL: return longest_Lchain(*ctx, a, b, L).est.value;
            case MetricKind::Dhat: return dhat(*ctx, a, b, L_max).lower.value;
        }
        return 0;
    };

    Rng rng(seed);
    for (int q = 0; q < n_quadruples; ++q) {
        Rng sub = rng.fork(q);
        Point w = space.sample_point(window, sub);
        Point x = space.sample_point(window, sub);
        Point y = space.sample_point(window, sub);
        Point z = space.sample_point(window, sub);
        double s1 = dist(w, x) + dist(y, z);
        double s2 = dist(w, y) + dist(x, z);
        double s3 = dist(w, z) + dist(x, y);
        double big = std::max({s1, s2, s3});
        double mid = s1 + s2 + s3 - big - std::min({s1, s2, s3});
        rep.delta_est = std::max(rep.delta_est, 0.5 * (big - mid));
    }
    return rep;
}

std::vector<Grid> grid_search(const Space& space,
                              const std::vector<std::shared_ptr<const Geodesic>>& h_probes,
                              const std::vector<std::shared_ptr<const Geodesic>>& k_probes,
                              const SampleBudget& budget) {
    (void)space;
    std::vector<Grid> grids;
    for (const auto& hp : h_probes) {
        if (hp->length < 2) continue;
        Chain hc = dual_chain(hp, 0, hp->length);
        if (hc.empty()) continue;
        for (const auto& kp : k_probes) {
            if (kp->length < 2) continue;
            Chain kc = dual_chain(kp, 0, kp->length);
            if (kc.empty()) continue;
            // crossing matrix, then shrink to the all-pairs-crossing core
            std::vector<char> keep_h(hc.size(), 1), keep_k(kc.size(), 1);
            std::vector<std::vector<char>> cross_m(hc.size(), std::vector<char>(kc.size(), 0));
            for (std::size_t i = 0; i < hc.size(); ++i)
                for (std::size_t j = 0; j < kc.size(); ++j)
                    cross_m[i][j] = crosses(hc.curtains[i], kc.curtains[j], budget).yes;
            bool changed = true;
            while (changed) {
                changed = false;
                for (std::size_t i = 0; i < hc.size(); ++i) {
                    if (!keep_h[i]) continue;
                    for (std::size_t j = 0; j < kc.size(); ++j)
                        if (keep_k[j] && !cross_m[i][j]) {
                            keep_h[i] = 0;
                            changed = true;
                            break;
                        }
                }
                for (std::size_t j = 0; j < kc.size(); ++j) {
                    if (!keep_k[j]) continue;
                    for (std::size_t i = 0; i < hc.size(); ++i)
                        if (keep_h[i] && !cross_m[i][j]) {
                            keep_k[j] = 0;
                            changed = true;
                            break;
                        }
                }
            }
            Grid g;
            for (std::size_t i = 0; i < hc.size(); ++i)
                if (keep_h[i]) g.H.curtains.push_back(hc.curtains[i]);
            for (std::size_t j = 0; j < kc.size(); ++j)
                if (keep_k[j]) g.K.curtains.push_back(kc.curtains[j]);
            g.H.cert = g.K.cert = ChainCert::CommonBase;
            g.thinness = (int)std::min(g.H.size(), g.K.size());
            if (g.thinness > 0) grids.push_back(std::move(g));
        }
    }
    std::sort(grids.begin(), grids.end(),
              [](const Grid& a, const Grid& b) { return a.thinness > b.thinness; });
    return grids;
}

QiReport qi_sanity(SeparationContext& ctx, const Point& x, const Point& y, int E) {
    if (E < 1) throw Error(ErrorCode::BadInput, "qi_sanity needs E >= 1");
    QiReport rep;
    rep.d = ctx.pool().space->dist(x, y);
    if (rep.d < 1e-12) {
        rep.d_E_lower = 0;
        rep.lower_ok = rep.upper_ok = true;
        rep.upper_rhs = (double)(E + 2);
        return rep;
    }
    rep.d_E_lower = longest_Lchain(ctx, x, y, E).est.value;
    rep.lower_ok = rep.d_E_lower <= rep.d + 1e-9;
    rep.upper_rhs = rep.d_E_lower * (E + 2) + (E + 2);
    rep.upper_ok = rep.d <= rep.upper_rhs + 1e-9;
    return rep;
}

} // namespace curtainlab
