#include "curtainlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "curtainlab/csv.hpp"
#include "curtainlab/svg.hpp"

namespace curtainlab {

namespace {
const double kZeta2 = M_PI * M_PI / 6.0;
}

Example51Result example51(int i_max, int L_max_table, double H, int dhat_L_max) {
    if (H <= 2.0 * L_max_table)
        throw Error(ErrorCode::TruncationTooLow, "example51 needs H > 2 max(L)");
    if (i_max < 1 || L_max_table < 1) throw Error(ErrorCode::BadInput, "bad example51 ranges");

    auto strip = StripSpace::example51(i_max + 1, H);
    double t_top = (double)(i_max + 1) * (i_max + 1) - 1.0;
    CurtainPool pool = build_strip_axis_pool(*strip, 0.5, t_top);
    SeparationContext ctx(pool);
    Example51Result out;
    out.pool_id = pool.id();
    out.dhat_cap = 2.0 * kZeta2;

    Point o = strip->make(0, 0);
    for (int i = 1; i <= i_max; ++i) {
        double t = (double)(i + 1) * (i + 1) - 1.0;
        Point y = strip->make(t, 0);
        for (int L = 1; L <= L_max_table; ++L) {
            Example51Row row;
            row.i = i;
            row.L = L;
            row.t = t;
            row.observed = (int)std::lround(longest_Lchain(ctx, o, y, L).est.value) - 1;
            row.predicted = std::min(2 * L, 2 * i);
            if (std::abs(row.observed - row.predicted) > 1) out.within_one = false;
            out.rows.push_back(row);
        }
        DhatResult d = dhat(ctx, o, y, dhat_L_max);
        out.dhat_lower.push_back({i, d.lower.value});
        if (d.lower.value > out.dhat_cap + 0.2) out.dhat_bounded = false;
    }
    return out;
}

InjectivityResult injectivity_probe(SeparationContext& ctx, const Geodesic& ray1,
                                    const Geodesic& ray2, const std::vector<double>& depths,
                                    int L_max) {
    InjectivityResult out;
    out.pool_id = ctx.pool().id();
    const Space* sp = ctx.pool().space;
    Point o = sp->basepoint();
    for (double di : depths) {
        for (double dj : depths) {
            if (di > ray1.length || dj > ray2.length) continue;
            Point xi = ray1.eval(di), yj = ray2.eval(dj);
            GromovInterval g = gromov_product(ctx, xi, yj, o, L_max);
            InjectivityRow row;
            row.depth_i = di;
            row.depth_j = dj;
            row.lo = g.lo;
            row.hi = g.hi;
            if (std::abs(di - dj) < 1e-12) {
                // same-ray control: (x_i . x_i)_o = dhat(o, x_i)
                row.control_lo = dhat(ctx, o, xi, L_max).lower.value;
            }
            out.rows.push_back(row);
        }
    }
    // plateau test on the cross-ray upper endpoints: the deepest third must
    // not exceed the shallow two-thirds by more than a small margin
    double max_early = 0, max_late = 0;
    double cutoff = depths.empty() ? 0 : depths[depths.size() * 2 / 3];
    for (const auto& r : out.rows) {
        double depth = std::max(r.depth_i, r.depth_j);
        if (depth <= cutoff)
            max_early = std::max(max_early, r.hi);
        else
            max_late = std::max(max_late, r.hi);
    }
    out.bounded = max_late <= max_early + 1.0;
    // control: diagonal lower endpoints must grow
    std::vector<double> diag;
    for (const auto& r : out.rows)
        if (std::abs(r.depth_i - r.depth_j) < 1e-12) diag.push_back(r.control_lo);
    out.control_diverging = diag.size() >= 3 && diag.back() > diag.front() + 1.0;
    return out;
}

UnboundednessResult unboundedness_probe(SeparationContext& ctx, const KappaChain& kc,
                                        double slack) {
    UnboundednessResult out;
    const Space* sp = ctx.pool().space;
    Point o = sp->basepoint();
    if (kc.elems.empty()) throw Error(ErrorCode::BadInput, "empty kappa-chain");
    double t1 = kc.elems.front().t;
    for (std::size_t idx = 1; idx < kc.elems.size(); ++idx) {
        const auto& e = kc.elems[idx];
        int m = (int)std::ceil(kc.C * kc.kappa(e.t));
        Point bt = kc.ray->eval(e.t);
        double dm = longest_Lchain(ctx, o, bt, m).est.value;
        UnboundednessRow row;
        row.i = e.i;
        row.t = e.t;
        row.m = m;
        row.left = dm / ((double)m * m * m);
        double denom = std::pow(kc.C * kc.kappa(e.t) + 1.0, 4.0);
        row.right = (e.t - t1) / denom - 1.0;
        if (row.left < row.right - slack) ++out.violations;
        out.rows.push_back(row);
    }
    // desk-scale divergence proxy: strict growth over the tail of the window
    auto growing = [](const std::vector<double>& v) {
        if (v.size() < 3) return false;
        std::size_t start = v.size() / 3;
        for (std::size_t i = start + 1; i < v.size(); ++i)
            if (v[i] <= v[i - 1]) return false;
        return v.back() > v.front();
    };
    std::vector<double> lefts, rights;
    for (const auto& r : out.rows) {
        lefts.push_back(r.left);
        rights.push_back(r.right);
    }
    out.left_growing = growing(lefts);
    out.right_growing = growing(rights);
    return out;
}

// ---------------------------------------------------------------------------

void write_example51_outputs(const Example51Result& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    CsvWriter csv({"i", "L", "t", "observed", "predicted", "dhat_lower", "dhat_cap", "pool_id"});
    for (const auto& row : r.rows) {
        double dl = 0;
        for (auto& [i, v] : r.dhat_lower)
            if (i == row.i) dl = v;
        csv.row()
            .col(row.i)
            .col(row.L)
            .col(row.t)
            .col(row.observed)
            .col(row.predicted)
            .col(dl)
            .col(r.dhat_cap)
            .col(r.pool_id);
    }
    csv.save(dir + "/results.csv");
    SvgPlot plot("strip-table chain counts", "L", "chain size");
    std::vector<double> xs, obs, pred;
    int last_i = r.rows.empty() ? 0 : r.rows.back().i;
    for (const auto& row : r.rows)
        if (row.i == last_i) {
            xs.push_back(row.L);
            obs.push_back(row.observed);
            pred.push_back(row.predicted);
        }
    plot.add_series("observed (i=" + std::to_string(last_i) + ")", xs, obs);
    plot.add_series("min(2L, 2i)", xs, pred);
    plot.save(dir + "/plot.svg");
}

void write_injectivity_outputs(const InjectivityResult& r, const std::string& dir,
                               std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    CsvWriter csv({"depth_i", "depth_j", "gromov_lo", "gromov_hi", "control_lo", "pool_id",
                   "seed"});
    for (const auto& row : r.rows)
        csv.row()
            .col(row.depth_i)
            .col(row.depth_j)
            .col(row.lo)
            .col(row.hi)
            .col(row.control_lo)
            .col(r.pool_id)
            .col(seed);
    csv.save(dir + "/results.csv");
    SvgPlot plot("gromov products along two rays", "depth", "product");
    std::vector<double> xs, hi, ctrl;
    for (const auto& row : r.rows)
        if (std::abs(row.depth_i - row.depth_j) < 1e-12) {
            xs.push_back(row.depth_i);
            hi.push_back(row.hi);
            ctrl.push_back(row.control_lo);
        }
    plot.add_series("cross-ray upper", xs, hi);
    plot.add_series("same-ray control", xs, ctrl);
    plot.save(dir + "/plot.svg");
}

void write_unboundedness_outputs(const UnboundednessResult& r, const std::string& dir,
                                 std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    CsvWriter csv({"i", "t", "m", "left", "right", "seed"});
    for (const auto& row : r.rows)
        csv.row().col(row.i).col(row.t).col(row.m).col(row.left).col(row.right).col(seed);
    csv.save(dir + "/results.csv");
    SvgPlot plot("d_m(o, b(t_i)) / m^3 vs analytic bound", "t_i", "value");
    std::vector<double> xs, left, right;
    for (const auto& row : r.rows) {
        xs.push_back(row.t);
        left.push_back(row.left);
        right.push_back(row.right);
    }
    plot.add_series("pool estimate", xs, left);
    plot.add_series("analytic", xs, right);
    plot.save(dir + "/plot.svg");
}

} // namespace curtainlab
