#include "curtainlab/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "curtainlab/csv.hpp"
#include "curtainlab/experiments.hpp"
#include "curtainlab/hyperbolicity.hpp"
#include "curtainlab/morse.hpp"
#include "curtainlab/svg.hpp"
#include "curtainlab/version.hpp"

namespace curtainlab {

using nlohmann::json;

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(path + "." + key + ": required field missing");
    return j.at(key);
}

double num_or(const json& j, const char* key, double fallback, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ValidationError(path + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

std::string str_or(const json& j, const char* key, const std::string& fallback,
                   const std::string& path) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_string()) throw ValidationError(path + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

} // namespace

// ---------------------------------------------------------------------------

SpaceHandle make_space(const std::string& kind, const std::string& params_json) {
    json params = params_json.empty() ? json::object() : json::parse(params_json);
    SpaceHandle h;
    h.kind = kind;
    if (kind == "plane") {
        h.space = std::make_shared<EuclideanPlane>();
    } else if (kind == "h2") {
        h.space = std::make_shared<HyperbolicPlane>();
    } else if (kind == "tripod") {
        double a = num_or(params, "leg_a", 10, "space.params");
        double b = num_or(params, "leg_b", 10, "space.params");
        double c = num_or(params, "leg_c", 10, "space.params");
        h.space = make_tripod(a, b, c);
    } else if (kind == "tree") {
        const json& edges = need(params, "edges", "space.params");
        const json& lengths = need(params, "lengths", "space.params");
        int n = (int)num_or(params, "n", 0, "space.params");
        std::vector<std::array<int, 2>> es;
        for (auto& e : edges) es.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
        std::vector<double> ls;
        for (auto& l : lengths) ls.push_back(l.get<double>());
        h.space = std::make_shared<MetricTree>(n, es, ls);
    } else if (kind == "strip") {
        int i_max = (int)num_or(params, "i_max", 8, "space.params");
        double H = num_or(params, "H", 64, "space.params");
        h.strip = StripSpace::example51(i_max, H);
        h.space = h.strip;
    } else if (kind == "figure2") {
        Fig2Model model;
        h.space = make_figure2_space(model);
        h.fig2 = model;
    } else if (kind == "polygon") {
        const json& bd = need(params, "boundary", "space.params");
        std::vector<Vec2> pts;
        for (auto& p : bd) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        h.space = std::make_shared<PolygonDomain>(pts);
    } else if (kind == "product") {
        std::vector<std::shared_ptr<const Space>> factors;
        if (params.contains("factors"))
            for (auto& f : params.at("factors"))
                factors.push_back(make_space(f.get<std::string>(), "{}").space);
        if (factors.empty()) {
            factors.push_back(std::make_shared<EuclideanPlane>());
            factors.push_back(std::make_shared<EuclideanPlane>());
        }
        h.space = std::make_shared<ProductSpace>(factors);
    } else {
        throw ValidationError("space.kind: unknown kind '" + kind + "'");
    }
    return h;
}

// ---------------------------------------------------------------------------
// pool presets

namespace {

std::shared_ptr<const Geodesic> geo(const Space& sp, Point a, Point b) {
    return std::make_shared<Geodesic>(sp.geodesic(a, b));
}

// plane: one long horizontal probe through the window plus one tall vertical
// probe providing the flat witness family
std::vector<std::shared_ptr<const Geodesic>> plane_probes(const EuclideanPlane& pl, double R,
                                                          double tall) {
    return {geo(pl, pl.make(-R - 2, 0), pl.make(R + 2, 0)),
            geo(pl, pl.make(0, -tall / 2), pl.make(0, tall / 2))};
}

// h2: the y-axis segment plus short perpendiculars at regular stations
std::vector<std::shared_ptr<const Geodesic>> h2_probes(const HyperbolicPlane& h2, double T,
                                                       double every, double perp_len) {
    std::vector<std::shared_ptr<const Geodesic>> probes;
    probes.push_back(std::make_shared<Geodesic>(h2.axis_ray(T)));
    for (double u = every; u < T; u += every)
        probes.push_back(std::make_shared<Geodesic>(h2.perpendicular_at(u, perp_len)));
    return probes;
}

std::vector<std::shared_ptr<const Geodesic>> tripod_probes(const MetricTree& tr) {
    auto tip = [&](int leg) { return tr.edge_point(leg, tr.edge_length(leg)); };
    return {geo(tr, tip(0), tip(1)), geo(tr, tip(0), tip(2)), geo(tr, tip(1), tip(2))};
}

} // namespace

CurtainPool make_preset_pool(const SpaceHandle& h, double density, std::size_t cap,
                             double extent, int L_max) {
    const Space& sp = *h.space;
    switch (sp.kind()) {
        case SpaceKind::EuclideanPlane: {
            const auto& pl = static_cast<const EuclideanPlane&>(sp);
            return build_pool(sp, plane_probes(pl, extent, 2.0 * (L_max + 3)), density, cap);
        }
        case SpaceKind::HyperbolicPlane: {
            const auto& h2 = static_cast<const HyperbolicPlane&>(sp);
            return build_pool(sp, h2_probes(h2, extent, 10.0, 4.0), density, cap);
        }
        case SpaceKind::MetricTree: {
            const auto& tr = static_cast<const MetricTree&>(sp);
            return build_pool(sp, tripod_probes(tr), density, cap);
        }
        case SpaceKind::StripSpace:
            return build_strip_axis_pool(*h.strip, density, extent, cap);
        case SpaceKind::PolygonDomain: {
            if (h.fig2) return build_fig2_pool(static_cast<const PolygonDomain&>(sp), *h.fig2,
                                               density, cap);
            throw ValidationError("pool.probes: no preset for a raw polygon space");
        }
        default:
            throw ValidationError("pool.probes: no preset pool for this space kind");
    }
}

Point parse_point(const SpaceHandle& h, const std::string& text) {
    auto split2 = [&](char sep) -> std::pair<double, double> {
        auto pos = text.find(sep);
        if (pos == std::string::npos)
            throw ValidationError("point '" + text + "': expected two coordinates");
        return {std::stod(text.substr(0, pos)), std::stod(text.substr(pos + 1))};
    };
    switch (h.space->kind()) {
        case SpaceKind::MetricTree: {
            auto [e, off] = split2(':');
            return static_cast<const MetricTree&>(*h.space).edge_point((int)e, off);
        }
        case SpaceKind::EuclideanPlane: {
            auto [x, y] = split2(',');
            return static_cast<const EuclideanPlane&>(*h.space).make(x, y);
        }
        case SpaceKind::HyperbolicPlane: {
            auto [x, y] = split2(',');
            return static_cast<const HyperbolicPlane&>(*h.space).make(x, y);
        }
        case SpaceKind::StripSpace:
        case SpaceKind::PolygonDomain: {
            auto [x, y] = split2(',');
            return static_cast<const PolygonDomain&>(*h.space).make(x, y);
        }
        default:
            throw ValidationError("point parsing unsupported for this space kind");
    }
}

namespace {

CurtainPool preset_pool(const SpaceHandle& h, double density, std::size_t cap, double extent,
                        int L_max) {
    return make_preset_pool(h, density, cap, extent, L_max);
}

// ---------------------------------------------------------------------------

struct RunCtx {
    SpaceHandle space;
    json scenario;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool check = false;
    double pool_density = 0.5;
    std::size_t pool_cap = 20000;
    int jobs = 1;
};

void write_delta_rows(const std::vector<DeltaReport>& reports, const std::string& dir,
                      const std::string& what) {
    std::filesystem::create_directories(dir);
    CsvWriter csv({"metric_kind", "L", "window", "delta_or_thinness", "samples", "pool_id",
                   "seed", "version"});
    for (const auto& r : reports)
        csv.row()
            .col(metric_kind_name(r.kind))
            .col(r.L)
            .col(r.window)
            .col(r.delta_est)
            .col(r.quadruples)
            .col(r.pool_id)
            .col(r.seed)
            .col(std::string(kVersion));
    csv.save(dir + "/results.csv");
    SvgPlot plot(what, "window", "delta");
    std::vector<double> xs, ys;
    for (const auto& r : reports) {
        xs.push_back(r.window);
        ys.push_back(r.delta_est);
    }
    plot.add_series(what, xs, ys);
    plot.save(dir + "/plot.svg");
}

void run_deltascan(RunCtx& rc, const json& params) {
    std::string metric = str_or(params, "metric", "ambient", "experiment.params");
    int quads = (int)num_or(params, "quadruples", 2000, "experiment.params");
    int L = (int)num_or(params, "L", 2, "experiment.params");
    int L_max = (int)num_or(params, "lmax", 16, "experiment.params");
    std::vector<double> windows;
    if (params.contains("windows"))
        for (auto& w : params.at("windows")) windows.push_back(w.get<double>());
    if (windows.empty()) windows = {10, 20, 40};
    MetricKind kind = metric == "ambient" ? MetricKind::Ambient
                      : metric == "d_L"   ? MetricKind::DL
                                          : MetricKind::Dhat;
    std::vector<DeltaReport> reports;
    for (double w : windows) {
        Window window;
        window.radius = w;
        if (kind == MetricKind::Ambient) {
            reports.push_back(delta_scan(*rc.space.space, kind, window, quads, rc.seed));
        } else {
            CurtainPool pool = preset_pool(rc.space, rc.pool_density, rc.pool_cap, w, L_max);
            SeparationContext ctx(pool);
            reports.push_back(
                delta_scan(*rc.space.space, kind, window, quads, rc.seed, &ctx, L, L_max));
        }
    }
    write_delta_rows(reports, rc.out_dir + "/deltascan", "delta (" + metric + ")");
    if (rc.check) {
        double cap = num_or(params, "check_max_delta", -1, "experiment.params");
        if (cap >= 0)
            for (const auto& r : reports)
                if (r.delta_est > cap) {
                    std::ostringstream os;
                    os << "deltascan: delta " << r.delta_est << " exceeds " << cap
                       << " at window " << r.window;
                    throw CheckFailure(os.str());
                }
    }
}

void run_gridscan(RunCtx& rc, const json& params) {
    std::vector<double> windows;
    if (params.contains("windows"))
        for (auto& w : params.at("windows")) windows.push_back(w.get<double>());
    if (windows.empty()) windows = {10, 20, 40};
    SampleBudget budget;
    budget.seed = rc.seed;
    std::vector<DeltaReport> rows;
    const Space& sp = *rc.space.space;
    for (double w : windows) {
        std::vector<std::shared_ptr<const Geodesic>> H, K;
        if (sp.kind() == SpaceKind::EuclideanPlane) {
            const auto& pl = static_cast<const EuclideanPlane&>(sp);
            for (double c : {-w / 4, 0.0, w / 4}) {
                H.push_back(geo(pl, pl.make(-w, c), pl.make(w, c)));
                K.push_back(geo(pl, pl.make(c, -w), pl.make(c, w)));
            }
        } else if (sp.kind() == SpaceKind::HyperbolicPlane) {
            const auto& h2 = static_cast<const HyperbolicPlane&>(sp);
            H.push_back(std::make_shared<Geodesic>(h2.axis_ray(w)));
            for (double u : {w / 4, w / 2, 3 * w / 4})
                K.push_back(std::make_shared<Geodesic>(h2.perpendicular_at(u, w)));
        } else if (sp.kind() == SpaceKind::MetricTree) {
            const auto& tr = static_cast<const MetricTree&>(sp);
            auto probes = tripod_probes(tr);
            H = {probes[0]};
            K = {probes[1], probes[2]};
        } else {
            throw ValidationError("experiment.gridscan: unsupported space kind");
        }
        auto grids = grid_search(sp, H, K, budget);
        DeltaReport row;
        row.kind = MetricKind::Ambient;
        row.window = w;
        row.delta_est = grids.empty() ? 0 : grids.front().thinness;
        row.quadruples = (int)grids.size();
        row.seed = rc.seed;
        rows.push_back(row);
    }
    write_delta_rows(rows, rc.out_dir + "/gridscan", "grid thinness");
    if (rc.check) {
        double min_at_max = num_or(params, "check_min_thinness_at_max_window", -1,
                                   "experiment.params");
        double max_all = num_or(params, "check_max_thinness", -1, "experiment.params");
        if (min_at_max >= 0 && rows.back().delta_est < min_at_max)
            throw CheckFailure("gridscan: thinness below required minimum");
        if (max_all >= 0)
            for (auto& r : rows)
                if (r.delta_est > max_all) throw CheckFailure("gridscan: thinness above cap");
    }
}

void run_shadow(RunCtx& rc, const json& params) {
    const json& kp = need(rc.scenario, "kappa", "scenario");
    SublinearFn kappa = SublinearFn::parse(str_or(kp, "family", "const", "kappa") + ":" +
                                           std::to_string(num_or(kp, "param", 1.0, "kappa")));
    double length = num_or(params, "length", 200, "experiment.params");
    int L_max = (int)num_or(params, "lmax", 64, "experiment.params");
    int n_samples = (int)num_or(params, "samples", 64, "experiment.params");
    const Space& sp = *rc.space.space;
    std::shared_ptr<const Geodesic> ray;
    if (sp.kind() == SpaceKind::HyperbolicPlane) {
        ray = std::make_shared<Geodesic>(
            static_cast<const HyperbolicPlane&>(sp).axis_ray(length));
    } else if (sp.kind() == SpaceKind::EuclideanPlane) {
        const auto& pl = static_cast<const EuclideanPlane&>(sp);
        ray = geo(pl, pl.make(0, 0), pl.make(length, 0));
    } else if (sp.kind() == SpaceKind::StripSpace) {
        ray = geo(sp, rc.space.strip->make(0, 0), rc.space.strip->make(length, 0));
    } else {
        throw ValidationError("experiment.shadow: unsupported space kind");
    }
    CurtainPool pool = preset_pool(rc.space, 0.51, rc.pool_cap, length, L_max);
    SeparationContext ctx(pool);
    double min_gap = std::max(5.0, 2.0 * kappa(length));
    ShadowReport rep = persistent_shadow_test(ctx, *ray, kappa.pow_fn(1.0), L_max, min_gap,
                                              n_samples);
    std::filesystem::create_directories(rc.out_dir + "/shadow");
    CsvWriter csv({"s", "t", "dhat_lower", "x", "residual", "C_fit", "pool_id", "seed",
                   "version"});
    for (const auto& s : rep.samples)
        csv.row()
            .col(s.s)
            .col(s.t)
            .col(s.dl)
            .col(s.x)
            .col(s.residual)
            .col(rep.C_fit)
            .col(pool.id())
            .col(rc.seed)
            .col(std::string(kVersion));
    csv.save(rc.out_dir + "/shadow/results.csv");
    SvgPlot plot("persistent shadow fit", "t - s", "dhat lower");
    std::vector<double> xs, ys;
    for (const auto& s : rep.samples) {
        xs.push_back(s.t - s.s);
        ys.push_back(s.dl);
    }
    plot.add_series("dhat lower", xs, ys);
    plot.save(rc.out_dir + "/shadow/plot.svg");
    if (rc.check) {
        double cmin = num_or(params, "check_min_C", -1, "experiment.params");
        double cmax = num_or(params, "check_max_C", -1, "experiment.params");
        if (cmin >= 0 && rep.C_fit < cmin) throw CheckFailure("shadow: C_fit below threshold");
        if (cmax >= 0 && rep.C_fit > cmax) throw CheckFailure("shadow: C_fit above threshold");
    }
}

void run_kchain(RunCtx& rc, const json& params) {
    const json& kp = need(rc.scenario, "kappa", "scenario");
    SublinearFn kappa = SublinearFn::parse(str_or(kp, "family", "const", "kappa") + ":" +
                                           std::to_string(num_or(kp, "param", 1.0, "kappa")));
    double length = num_or(params, "length", 400, "experiment.params");
    const Space& sp = *rc.space.space;
    std::shared_ptr<const Geodesic> ray;
    Window window;
    if (sp.kind() == SpaceKind::HyperbolicPlane) {
        ray = std::make_shared<Geodesic>(
            static_cast<const HyperbolicPlane&>(sp).axis_ray(length));
        window.radius = length;
        window.lateral = 4;
    } else if (sp.kind() == SpaceKind::StripSpace) {
        ray = geo(sp, rc.space.strip->make(0, 0),
                  rc.space.strip->make(std::min(length, rc.space.strip->model().x_max - 1), 0));
        window.radius = ray->length;
    } else {
        throw ValidationError("experiment.kchain: unsupported space kind");
    }
    double D;
    std::string d_spec = str_or(params, "D", "auto", "experiment.params");
    MorseBudget budget;
    budget.seed = rc.seed;
    if (d_spec == "auto") {
        ContractionReport cr = estimate_contraction(*ray, kappa, budget, window);
        D = cr.D_est;
    } else {
        D = std::stod(d_spec);
    }
    if (D <= 0) throw ValidationError("experiment.params.D: must be positive or 'auto'");
    CurtainPool pool = preset_pool(rc.space, 0.51, rc.pool_cap, ray->length, 64);
    SeparationContext ctx(pool);
    KappaChain kc = build_kappa_chain(ctx, ray, kappa, D);
    std::filesystem::create_directories(rc.out_dir + "/kchain");
    save_kappa_chain(kc, rc.out_dir + "/kchain/results.csv");
    SvgPlot plot("kappa-chain stations", "i", "t_i");
    std::vector<double> xs, ys;
    for (const auto& e : kc.elems) {
        xs.push_back(e.i);
        ys.push_back(e.t);
    }
    plot.add_series("t_i", xs, ys);
    plot.save(rc.out_dir + "/kchain/plot.svg");
    if (rc.check) {
        if (!kc.spacing_ok()) throw CheckFailure("kchain: spacing identity violated");
        if (!kc.separation_ok()) throw CheckFailure("kchain: separation evidence violated");
    }
}

void run_injectivity(RunCtx& rc, const json& params) {
    std::vector<double> depths;
    if (params.contains("depths"))
        for (auto& d : params.at("depths")) depths.push_back(d.get<double>());
    if (depths.empty()) depths = {2, 4, 6, 8};
    int L_max = (int)num_or(params, "lmax", 16, "experiment.params");
    const Space& sp = *rc.space.space;
    std::shared_ptr<const Geodesic> r1, r2;
    if (sp.kind() == SpaceKind::MetricTree) {
        const auto& tr = static_cast<const MetricTree&>(sp);
        r1 = geo(tr, tr.vertex_point(0), tr.edge_point(0, tr.edge_length(0)));
        r2 = geo(tr, tr.vertex_point(0), tr.edge_point(1, tr.edge_length(1)));
    } else if (sp.kind() == SpaceKind::HyperbolicPlane) {
        const auto& h2 = static_cast<const HyperbolicPlane&>(sp);
        double T = depths.back() + 2;
        r1 = std::make_shared<Geodesic>(h2.axis_ray(T));
        // a second geodesic through (0,1): the unit semicircle toward +1
        auto on_circle = [&](double s) {
            double theta = 2.0 * std::atan(std::exp(-s));
            return h2.make(std::cos(theta), std::sin(theta));
        };
        r2 = geo(h2, h2.make(0, 1), on_circle(T));
    } else {
        throw ValidationError("experiment.injectivity: unsupported space kind");
    }
    CurtainPool pool = preset_pool(rc.space, rc.pool_density, rc.pool_cap,
                                   depths.back() + 4, L_max);
    SeparationContext ctx(pool);
    InjectivityResult res = injectivity_probe(ctx, *r1, *r2, depths, L_max);
    write_injectivity_outputs(res, rc.out_dir + "/injectivity", rc.seed);
    if (rc.check) {
        if (!res.bounded) throw CheckFailure("injectivity: cross-ray products not bounded");
        if (!res.control_diverging)
            throw CheckFailure("injectivity: same-ray control does not diverge");
    }
}

void run_unbnd(RunCtx& rc, const json& params) {
    const json& kp = need(rc.scenario, "kappa", "scenario");
    SublinearFn kappa = SublinearFn::parse(str_or(kp, "family", "const", "kappa") + ":" +
                                           std::to_string(num_or(kp, "param", 1.0, "kappa")));
    double length = num_or(params, "length", 400, "experiment.params");
    const Space& sp = *rc.space.space;
    std::shared_ptr<const Geodesic> ray;
    Window window;
    if (sp.kind() == SpaceKind::HyperbolicPlane) {
        ray = std::make_shared<Geodesic>(
            static_cast<const HyperbolicPlane&>(sp).axis_ray(length));
        window.radius = length;
    } else if (sp.kind() == SpaceKind::StripSpace) {
        ray = geo(sp, rc.space.strip->make(0, 0),
                  rc.space.strip->make(std::min(length, rc.space.strip->model().x_max - 1), 0));
        window.radius = ray->length;
    } else {
        throw ValidationError("experiment.unbnd: unsupported space kind");
    }
    MorseBudget budget;
    budget.seed = rc.seed;
    std::string d_spec = str_or(params, "D", "auto", "experiment.params");
    double D = d_spec == "auto" ? estimate_contraction(*ray, kappa, budget, window).D_est
                                : std::stod(d_spec);
    CurtainPool pool = preset_pool(rc.space, 0.51, rc.pool_cap, ray->length, 64);
    SeparationContext ctx(pool);
    KappaChain kc = build_kappa_chain(ctx, ray, kappa, D);
    UnboundednessResult res = unboundedness_probe(ctx, kc);
    write_unboundedness_outputs(res, rc.out_dir + "/unbnd", rc.seed);
    if (rc.check) {
        if (res.violations > 0) throw CheckFailure("unbnd: analytic bound violated");
        if (num_or(params, "check_growth", 0, "experiment.params") > 0 &&
            !(res.left_growing && res.right_growing))
            throw CheckFailure("unbnd: growth expectation violated");
        if (num_or(params, "check_right_bounded", -1, "experiment.params") >= 0)
            for (auto& r : res.rows)
                if (r.right > num_or(params, "check_right_bounded", -1, "experiment.params"))
                    throw CheckFailure("unbnd: analytic side expected bounded");
    }
}

void run_example51(RunCtx& rc, const json& params) {
    int i_max = (int)num_or(params, "i_max", 6, "experiment.params");
    int L_max = (int)num_or(params, "L_max", 8, "experiment.params");
    double H = num_or(params, "H", 64, "experiment.params");
    Example51Result res = example51(i_max, L_max, H);
    write_example51_outputs(res, rc.out_dir + "/example51");
    if (rc.check) {
        if (!res.within_one) throw CheckFailure("example51: observed vs min(2L,2i) off by > 1");
        if (!res.dhat_bounded) throw CheckFailure("example51: dhat lower exceeds 2 zeta(2) cap");
    }
}

void dispatch(RunCtx& rc, const std::string& name, const json& params) {
    if (name == "example51")
        run_example51(rc, params);
    else if (name == "deltascan")
        run_deltascan(rc, params);
    else if (name == "gridscan")
        run_gridscan(rc, params);
    else if (name == "shadow")
        run_shadow(rc, params);
    else if (name == "kchain")
        run_kchain(rc, params);
    else if (name == "injectivity")
        run_injectivity(rc, params);
    else if (name == "unbnd")
        run_unbnd(rc, params);
    else
        throw ValidationError("experiment.name: unknown experiment '" + name + "'");
}

} // namespace

// ---------------------------------------------------------------------------

ScenarioOutcome run_scenario_text(const std::string& json_text,
                                  const std::map<std::string, std::string>& overrides,
                                  bool check) {
    try {
        json doc;
        try {
            doc = json::parse(json_text);
        } catch (const std::exception& e) {
            throw ValidationError(std::string("scenario: not valid JSON: ") + e.what());
        }
        RunCtx rc;
        const json& space = need(doc, "space", "scenario");
        std::string kind = need(space, "kind", "scenario.space").get<std::string>();
        std::string params =
            space.contains("params") ? space.at("params").dump() : std::string("{}");
        rc.space = make_space(kind, params);
        rc.scenario = doc;
        rc.seed = (std::uint64_t)num_or(doc, "seed", 0, "scenario");
        rc.out_dir = str_or(doc, "out_dir", "out", "scenario");
        if (const char* env = std::getenv("CURTAINLAB_OUT")) rc.out_dir = env;
        if (auto it = overrides.find("seed"); it != overrides.end())
            rc.seed = std::stoull(it->second);
        if (auto it = overrides.find("out_dir"); it != overrides.end()) rc.out_dir = it->second;
        rc.check = check;
        if (doc.contains("pool")) {
            rc.pool_density = num_or(doc.at("pool"), "density", 0.5, "scenario.pool");
            rc.pool_cap = (std::size_t)num_or(doc.at("pool"), "cap", 20000, "scenario.pool");
        }
        const json& exp = need(doc, "experiment", "scenario");
        std::string name = need(exp, "name", "scenario.experiment").get<std::string>();
        json eparams = exp.contains("params") ? exp.at("params") : json::object();
        dispatch(rc, name, eparams);
        return {0, "ok"};
    } catch (const ValidationError& e) {
        return {2, e.what()};
    } catch (const CheckFailure& e) {
        return {3, e.what()};
    } catch (const Error& e) {
        return {2, e.what()};
    } catch (const std::exception& e) {
        return {2, e.what()};
    }
}

ScenarioOutcome run_scenario_file(const std::string& path,
                                  const std::map<std::string, std::string>& overrides,
                                  bool check) {
    std::ifstream f(path);
    if (!f) return {2, "cannot open scenario file: " + path};
    std::stringstream ss;
    ss << f.rdbuf();
    return run_scenario_text(ss.str(), overrides, check);
}

} // namespace curtainlab
