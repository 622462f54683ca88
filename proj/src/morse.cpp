#include "curtainlab/morse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "curtainlab/csv.hpp"
#include "curtainlab/rng.hpp"

namespace curtainlab {

// ---------------------------------------------------------------------------

SublinearFn::SublinearFn(KappaFamily f, double p) : family_(f), param_(p) { check_invariants(); }

SublinearFn SublinearFn::constant(double c) { return SublinearFn(KappaFamily::Const, c); }
SublinearFn SublinearFn::log_pow(double p) { return SublinearFn(KappaFamily::Log, p); }
SublinearFn SublinearFn::power(double a) { return SublinearFn(KappaFamily::Power, a); }

SublinearFn SublinearFn::parse(const std::string& s) {
    auto colon = s.find(':');
    std::string fam = (colon == std::string::npos) ? s : s.substr(0, colon);
    double p = (colon == std::string::npos) ? 1.0 : std::stod(s.substr(colon + 1));
    if (fam == "const") return constant(p);
    if (fam == "log") return log_pow(p);
    if (fam == "power" || fam == "sqrt") return power(fam == "sqrt" ? 0.5 : p);
    throw Error(ErrorCode::BadInput, "unknown kappa family: " + fam);
}

double SublinearFn::operator()(double t) const {
    t = std::max(t, 0.0);
    switch (family_) {
        case KappaFamily::Const: return param_;
        case KappaFamily::Log: return std::pow(1.0 + std::log1p(t), param_);
        case KappaFamily::Power: return std::pow(1.0 + t, param_);
    }
    return 1;
}

double SublinearFn::deriv(double t) const {
    t = std::max(t, 0.0);
    switch (family_) {
        case KappaFamily::Const: return 0;
        case KappaFamily::Log:
            return param_ * std::pow(1.0 + std::log1p(t), param_ - 1.0) / (1.0 + t);
        case KappaFamily::Power: return param_ * std::pow(1.0 + t, param_ - 1.0);
    }
    return 0;
}

bool SublinearFn::kappa4_sublinear() const {
    switch (family_) {
        case KappaFamily::Const: return true;
        case KappaFamily::Log: return true;
        case KappaFamily::Power: return param_ < 0.25;
    }
    return false;
}

std::string SublinearFn::name() const {
    std::ostringstream os;
    switch (family_) {
        case KappaFamily::Const: os << "const:"; break;
        case KappaFamily::Log: os << "log:"; break;
        case KappaFamily::Power: os << "power:"; break;
    }
    os << param_;
    return os.str();
}

std::function<double(double)> SublinearFn::pow_fn(double k) const {
    SublinearFn self = *this;
    return [self, k](double t) { return std::pow(self(t), k); };
}

void SublinearFn::check_invariants() const {
    switch (family_) {
        case KappaFamily::Const:
            if (param_ < 1) throw Error(ErrorCode::BadInput, "const kappa needs c >= 1");
            break;
        case KappaFamily::Log:
            if (param_ < 1) throw Error(ErrorCode::BadInput, "log kappa needs p >= 1");
            break;
        case KappaFamily::Power:
            if (!(param_ > 0 && param_ < 1))
                throw Error(ErrorCode::BadInput, "power kappa needs a in (0,1)");
            break;
    }
    // kappa(t)/t -> 0, checked at t = 1e6
    if ((*this)(1e6) / 1e6 >= 0.05)
        throw Error(ErrorCode::BadInput, "kappa fails the sublinearity spot check at t = 1e6");
    // concavity via sampled second differences
    for (double t : {0.0, 0.5, 2.0, 10.0, 100.0, 1e4}) {
        double h = std::max(1e-3, t * 1e-3);
        double second = (*this)(t + 2 * h) - 2 * (*this)(t + h) + (*this)(t);
        if (second > 1e-9)
            throw Error(ErrorCode::BadInput, "kappa family instance is not concave");
    }
    for (double t : {0.0, 1.0, 7.0, 300.0})
        if ((*this)(t) < 1.0 - 1e-12 || (*this)(t + 1) < (*this)(t) - 1e-12)
            throw Error(ErrorCode::BadInput, "kappa must be >= 1 and nondecreasing");
}

// ---------------------------------------------------------------------------

namespace {

// interior + boundary points of the metric ball, per space kind
std::vector<Point> ball_points(const Point& center, double radius, const MorseBudget& budget,
                               std::uint64_t salt) {
    const Space* sp = center.space;
    Rng rng(hash_combine(budget.seed, salt));
    std::vector<Point> pts;
    switch (sp->kind()) {
        case SpaceKind::EuclideanPlane: {
            const auto* pl = static_cast<const EuclideanPlane*>(sp);
            Vec2 c = center.v2();
            for (int i = 0; i < budget.n_boundary; ++i) {
                double phi = 2 * M_PI * i / budget.n_boundary;
                pts.push_back(pl->make(c.x + radius * std::cos(phi), c.y + radius * std::sin(phi)));
            }
            for (int i = 0; i < budget.n_ball; ++i) {
                double phi = rng.uniform(0, 2 * M_PI), rr = radius * std::sqrt(rng.next_double());
                pts.push_back(pl->make(c.x + rr * std::cos(phi), c.y + rr * std::sin(phi)));
            }
            break;
        }
        case SpaceKind::HyperbolicPlane: {
            // hyperbolic circle = euclidean circle with shifted center
            const auto* h2 = static_cast<const HyperbolicPlane*>(sp);
            Vec2 c = center.v2();
            double ec_y = c.y * std::cosh(radius);
            double er = c.y * std::sinh(radius);
            for (int i = 0; i < budget.n_boundary; ++i) {
                double phi = 2 * M_PI * i / budget.n_boundary;
                double y = ec_y + er * std::sin(phi);
                if (y > 1e-12) pts.push_back(h2->make(c.x + er * std::cos(phi), y));
            }
            for (int i = 0; i < budget.n_ball; ++i) {
                double phi = rng.uniform(0, 2 * M_PI);
                double rr = er * std::sqrt(rng.next_double());
                double y = ec_y + rr * std::sin(phi);
                if (y > 1e-12) pts.push_back(h2->make(c.x + rr * std::cos(phi), y));
            }
            break;
        }
        case SpaceKind::MetricTree: {
            Window w;
            for (int i = 0; i < budget.n_ball + budget.n_boundary; ++i) {
                Point p = sp->sample_point(w, rng);
                if (sp->dist(center, p) <= radius) pts.push_back(p);
            }
            pts.push_back(center);
            break;
        }
        default: {
            // polygon kinds: euclidean disk rejection; intrinsic >= euclidean
            const auto* dom = static_cast<const PolygonDomain*>(sp);
            Vec2 c = center.v2();
            int kept = 0;
            for (int i = 0; i < 6 * (budget.n_ball + budget.n_boundary) && kept < budget.n_ball;
                 ++i) {
                double phi = rng.uniform(0, 2 * M_PI), rr = radius * std::sqrt(rng.next_double());
                Vec2 v{c.x + rr * std::cos(phi), c.y + rr * std::sin(phi)};
                if (!dom->contains(v, -1e-9)) continue;
                Point p = dom->make(v.x, v.y);
                if (sp->dist(center, p) <= radius) {
                    pts.push_back(p);
                    ++kept;
                }
            }
            pts.push_back(center);
            break;
        }
    }
    return pts;
}

} // namespace

double projected_ball_diameter(const Geodesic& ray, const Point& center, double radius,
                               const MorseBudget& budget, std::uint64_t salt) {
    double lo = 1e300, hi = -1e300;
    for (const Point& p : ball_points(center, radius, budget, salt)) {
        double t = project(p, ray).t;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return (hi > lo) ? hi - lo : 0.0;
}

ContractionReport estimate_contraction(const Geodesic& ray, const SublinearFn& kappa,
                                       const MorseBudget& budget, const Window& window) {
    if (ray.length < 100.0)
        throw Error(ErrorCode::RayTooShort, "estimate_contraction needs ray length >= 100");
    const Space* sp = ray.space;
    Point o = sp->basepoint();
    Rng rng(budget.seed);
    ContractionReport rep;
    const double thetas[] = {0.5, 0.9, 0.99};
    int made = 0, tries = 0;
    while (made < budget.n_centers && tries < 40 * budget.n_centers) {
        ++tries;
        Point x = sp->sample_point(window, rng);
        ProjResult pr = project(x, ray);
        if (pr.dist < 0.5) continue; // need room for a ball disjoint from the ray
        for (double theta : thetas) {
            double rho = theta * pr.dist;
            // ball disjoint from the ray by construction: d - rho >= 0.01 d
            double diam = projected_ball_diameter(ray, x, rho, budget,
                                                  (std::uint64_t)made * 8 + (int)(theta * 10));
            ContractionSample s{sp->dist(o, x), pr.dist, rho, diam, kappa(sp->dist(o, x))};
            rep.samples.push_back(s);
            rep.D_est = std::max(rep.D_est, diam / s.kappa_c);
        }
        ++made;
    }
    if (rep.samples.empty())
        throw Error(ErrorCode::BadInput, "no contraction samples produced (window too tight?)");
    return rep;
}

// ---------------------------------------------------------------------------

bool KappaChain::spacing_ok(double tol) const {
    double prev = 0;
    for (const auto& e : elems) {
        double want = C * kappa(e.t);
        if (std::abs((e.t - prev) - want) > tol) return false;
        prev = e.t;
    }
    return true;
}

bool KappaChain::separation_ok() const {
    for (std::size_t i = 0; i + 1 < elems.size(); ++i)
        if (elems[i].witness_n > C * kappa(elems[i + 1].t) + 1e-9) return false;
    return true;
}

KappaChain build_kappa_chain(SeparationContext& ctx, std::shared_ptr<const Geodesic> ray,
                             const SublinearFn& kappa, double D, int max_elems) {
    if (D <= 0) throw Error(ErrorCode::BadInput, "build_kappa_chain needs D > 0");
    const double step = 10.0 * D;
    KappaChain kc{ray, kappa, step, {}, {}, ctx.pool().id()};
    kc.chain.cert = ChainCert::CommonBase;

    double t = 0; // virtual start at the ray origin; curtains from t_1 on
    while ((int)kc.elems.size() < max_elems) {
        // solve s - t = step * kappa(s); phi is convex with phi(lo) <= 0
        auto phi = [&](double s) { return s - t - step * kappa(s); };
        double lo = t + step * kappa(t);
        double hi = lo + 1.0;
        int grow = 0;
        while (phi(hi) < 0) {
            hi = t + 2.0 * (hi - t);
            if (++grow > 200) throw Error(ErrorCode::NoRoot, "root bracket failed to grow");
        }
        while (hi - lo > 1e-10) {
            double mid = 0.5 * (lo + hi);
            (phi(mid) < 0 ? lo : hi) = mid;
        }
        double next = 0.5 * (lo + hi);
        if (next + 0.5 >= ray->length) break;
        kc.chain.curtains.emplace_back(ray, next);
        kc.elems.push_back({(int)kc.elems.size() + 1, next, 0, 0});
        t = next;
    }
    if (kc.elems.size() < 3)
        throw Error(ErrorCode::RayTooShort, "ray too short for a 3-element kappa-chain");

    for (std::size_t i = 0; i + 1 < kc.elems.size(); ++i) {
        WitnessResult w =
            separation_witness(ctx, kc.chain.curtains[i], kc.chain.curtains[i + 1]);
        kc.elems[i].witness_n = w.n;
        kc.elems[i].target = step * kappa(kc.elems[i + 1].t) + 3.0;
    }
    return kc;
}

void save_kappa_chain(const KappaChain& kc, const std::string& path) {
    CsvWriter csv({"i", "t_i", "witness_n", "target_bound", "pool_id", "kappa", "C"});
    for (const auto& e : kc.elems)
        csv.row()
            .col(e.i)
            .col(e.t)
            .col(e.witness_n)
            .col(e.target)
            .col(kc.pool_id)
            .col(kc.kappa.name())
            .col(kc.C);
    csv.save(path);
}

// ---------------------------------------------------------------------------

SlimReport kappa_slim_test(const Geodesic& ray, const SublinearFn& kappa,
                           const MorseBudget& budget, const Window& window, double bound) {
    const Space* sp = ray.space;
    Point o = sp->basepoint();
    Rng rng(hash_combine(budget.seed, 0x51f3ULL));
    SlimReport rep;
    rep.bound = bound;
    int made = 0, tries = 0;
    while (made < budget.n_pairs && tries < 50 * budget.n_pairs) {
        ++tries;
        Point x = sp->sample_point(window, rng);
        double u = rng.uniform(0.0, ray.length);
        Point y = ray.eval(u);
        ProjResult foot = project(x, ray);
        if (sp->dist(x, y) < 1e-9) continue;
        Geodesic xy = sp->geodesic(x, y);
        Point pb = ray.eval(foot.t);
        double d = project(pb, xy).dist;
        double kap = kappa(sp->dist(o, pb));
        SlimSample s{foot.t, d, d / kap};
        rep.samples.push_back(s);
        rep.C_est = std::max(rep.C_est, s.ratio);
        if (bound > 0 && s.ratio > bound) ++rep.violations;
        ++made;
    }
    return rep;
}

ExcursionReport verify_excursion_implies_contracting(const KappaChain& kc,
                                                     const MorseBudget& budget,
                                                     const Window& window, double multiple) {
    ExcursionReport rep;
    rep.excursion_C = kc.C;
    SlimReport slim = kappa_slim_test(*kc.ray, kc.kappa, budget, window, multiple * kc.C);
    rep.slim_C_est = slim.C_est;
    rep.ratio = (kc.C > 0) ? slim.C_est / kc.C : 0;
    rep.violations = slim.violations;
    rep.low_confidence = kc.elems.size() <= 3 || slim.samples.size() < 30;
    return rep;
}

// ---------------------------------------------------------------------------

ShadowReport persistent_shadow_test(SeparationContext& ctx, const Geodesic& ray,
                                    const std::function<double(double)>& kappa, int L_max,
                                    double min_gap, int n_samples) {
    if (ray.length < 200.0)
        throw Error(ErrorCode::RayTooShort, "persistent_shadow_test needs ray length >= 200");
    ShadowReport rep;
    rep.C_fit = 1e18;
    // deterministic schedule: geometric gaps swept across start positions
    std::vector<std::pair<double, double>> pairs;
    for (double gap = min_gap; gap <= ray.length - 1 && (int)pairs.size() < n_samples; gap *= 2) {
        int starts = std::max(1, n_samples / 8);
        for (int i = 0; i < starts && (int)pairs.size() < n_samples; ++i) {
            double s = (ray.length - gap) * i / std::max(1, starts);
            pairs.push_back({s, s + gap});
        }
    }
    for (auto [s, t] : pairs) {
        Point ps = ray.eval(s), pt = ray.eval(t);
        DhatResult d = dhat(ctx, ps, pt, L_max);
        double x = (t - s) / kappa(t) - 1.0;
        ShadowSample sample{s, t, d.lower.value, x, 0};
        if (x > 1e-9) {
            ++rep.constrained;
            rep.C_fit = std::min(rep.C_fit, d.lower.value / x);
        }
        rep.samples.push_back(sample);
    }
    if (rep.constrained == 0) rep.C_fit = 0;
    for (auto& s : rep.samples) s.residual = s.dl - rep.C_fit * std::max(s.x, 0.0);
    return rep;
}

} // namespace curtainlab
