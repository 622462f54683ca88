#include "curtainlab/curtains.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace curtainlab {

Curtain::Curtain(std::shared_ptr<const Geodesic> base_geodesic, double pole_center,
                 double classification_tol, bool allow_boundary_pole)
    : base(std::move(base_geodesic)), r(pole_center), tol(classification_tol) {
    if (!base) throw Error(ErrorCode::BadInput, "curtain needs a base geodesic");
    double lo = r - 0.5, hi = r + 0.5;
    if (allow_boundary_pole) {
        if (lo < -1e-9 || hi > base->length + 1e-9)
            throw Error(ErrorCode::BadInput, "pole outside base parameter range");
    } else {
        if (!(lo > 0) || !(hi < base->length))
            throw Error(ErrorCode::BadInput, "pole must lie in the interior of the base");
    }
}

Side side(const Curtain& h, const Point& p, double proj_tol) {
    if (p.space != h.space()) throw Error(ErrorCode::MixedSpaces, "side() across spaces");
    ProjResult pr = project(p, *h.base, proj_tol);
    if (pr.t < h.pole_lo() - h.tol) return Side::Minus;
    if (pr.t > h.pole_hi() + h.tol) return Side::Plus;
    return Side::On;
}

bool same_base(const Curtain& a, const Curtain& b) {
    if (a.base == b.base) return true;
    if (a.space() != b.space()) return false;
    const Geodesic& x = *a.base;
    const Geodesic& y = *b.base;
    if (std::abs(x.length - y.length) > 1e-12) return false;
    const Space* sp = a.space();
    return sp->dist(x.a, y.a) < 1e-12 && sp->dist(x.b, y.b) < 1e-12;
}

// ---------------------------------------------------------------------------
// fiber generation

namespace {

Vec2 h2_frame_fiber_point(const H2Arc& arc, double s_base, double v) {
    // in the frame where the base is the positive imaginary axis, the
    // perpendicular geodesic at log-parameter s is the semicircle |w| = e^s
    double theta = 2.0 * std::atan(std::exp(v));
    if (arc.vertical) {
        double R = std::exp(s_base);
        return Vec2{arc.x + R * std::cos(theta), R * std::sin(theta)};
    }
    std::complex<double> w = std::exp(s_base) * std::complex<double>(std::cos(theta), std::sin(theta));
    std::complex<double> z = (w * arc.mu_minus - arc.mu_plus) / (w - 1.0);
    return Vec2{z.real(), std::max(z.imag(), 1e-300)};
}

std::vector<double> grid(double lo, double hi, int steps) {
    std::vector<double> out;
    if (steps < 2) {
        out.push_back(0.5 * (lo + hi));
        return out;
    }
    for (int i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * i / (steps - 1));
    return out;
}

} // namespace

std::vector<Point> sample_on_curtain(const Curtain& k, const SampleBudget& budget) {
    const Space* sp = k.space();
    std::vector<Point> out;
    double in_lo = k.pole_lo() + 1e-9, in_hi = k.pole_hi() - 1e-9;
    switch (sp->kind()) {
        case SpaceKind::EuclideanPlane: {
            const auto* pl = static_cast<const EuclideanPlane*>(sp);
            Vec2 a = k.base->a.v2(), b = k.base->b.v2();
            double L = k.base->length;
            Vec2 u = (1.0 / L) * (b - a);
            Vec2 n{-u.y, u.x};
            for (double t : grid(in_lo, in_hi, budget.pole_steps)) {
                Vec2 p0{a.x + t * u.x, a.y + t * u.y};
                for (double s : grid(-budget.reach, budget.reach, budget.fiber_steps))
                    out.push_back(pl->make(p0.x + s * n.x, p0.y + s * n.y));
            }
            break;
        }
        case SpaceKind::HyperbolicPlane: {
            const auto* h2 = static_cast<const HyperbolicPlane*>(sp);
            const H2Arc& arc = std::get<H2Arc>(k.base->payload);
            for (double t : grid(in_lo, in_hi, budget.pole_steps)) {
                double s = arc.s0 + arc.dir * t;
                for (double v : grid(-budget.reach, budget.reach, budget.fiber_steps)) {
                    Vec2 z = h2_frame_fiber_point(arc, s, v);
                    if (z.y > 0) out.push_back(h2->make(z.x, z.y));
                }
            }
            break;
        }
        case SpaceKind::MetricTree: {
            const auto* tr = static_cast<const MetricTree*>(sp);
            for (double t : grid(in_lo, in_hi, budget.pole_steps)) out.push_back(k.base->eval(t));
            for (int e = 0; e < tr->n_edges(); ++e) {
                for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                    Point p = tr->edge_point(e, f * tr->edge_length(e));
                    if (side(k, p) == Side::On) out.push_back(p);
                }
            }
            break;
        }
        default: {
            // generic rejection: points near the pole center, then walks
            // toward the pole (the star-convex direction) stay on the curtain
            Rng rng(budget.seed ^ 0x5eedULL);
            Point c = k.pole_center_point();
            for (double t : grid(in_lo, in_hi, budget.pole_steps)) out.push_back(k.base->eval(t));
            Window w;
            w.radius = 0; // full region for polygon kinds
            for (int i = 0; i < budget.generic_tries; ++i) {
                Point p = sp->sample_point(w, rng);
                if (side(k, p) == Side::On) {
                    out.push_back(p);
                    Geodesic leg = sp->geodesic(p, c);
                    for (double f : {0.25, 0.5, 0.75}) {
                        Point q = leg.eval(f * leg.length);
                        if (side(k, q) == Side::On) out.push_back(q);
                    }
                }
            }
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

CrossResult cross_search_points(const Curtain& h, const std::vector<Point>& on_k) {
    std::optional<Point> minus, plus;
    for (const Point& p : on_k) {
        Side s = side(h, p);
        if (s == Side::Minus && !minus) minus = p;
        if (s == Side::Plus && !plus) plus = p;
        if (minus && plus) {
            CrossResult r;
            r.yes = true;
            r.witness = std::make_pair(*minus, *plus);
            return r;
        }
    }
    return {};
}

} // namespace

CrossResult crosses(const Curtain& h, const Curtain& k, const SampleBudget& budget) {
    if (h.space() != k.space()) throw Error(ErrorCode::MixedSpaces, "crosses() across spaces");
    const Space* sp = h.space();

    // common base: the fiber of k projects exactly onto its own pole, so it
    // can never reach both sides of an equally wide pole
    if (same_base(h, k)) {
        CrossResult r;
        r.exact = true;
        return r;
    }

    if (sp->kind() == SpaceKind::EuclideanPlane) {
        // fibers of interior poles of segments are infinite perpendicular
        // strips: two strips cross exactly when the bases are not parallel
        Vec2 ah = h.base->a.v2(), bh = h.base->b.v2();
        Vec2 ak = k.base->a.v2(), bk = k.base->b.v2();
        Vec2 uh = (1.0 / h.base->length) * (bh - ah);
        Vec2 uk = (1.0 / k.base->length) * (bk - ak);
        double c = cross(uh, uk);
        CrossResult r;
        r.exact = true;
        if (std::abs(c) < 1e-12) return r; // parallel strips never cross
        const auto* pl = static_cast<const EuclideanPlane*>(sp);
        // walk k's central fiber until the foot on h passes each pole edge
        Vec2 p0{ak.x + k.r * uk.x, ak.y + k.r * uk.y};
        Vec2 n{-uk.y, uk.x};
        double f0 = dot(p0 - ah, uh);
        double rate = dot(n, uh);
        double margin = 10 * h.tol + 1e-6;
        double s_minus = (h.pole_lo() - margin - f0) / rate;
        double s_plus = (h.pole_hi() + margin - f0) / rate;
        Point pm = pl->make(p0.x + s_minus * n.x, p0.y + s_minus * n.y);
        Point pp = pl->make(p0.x + s_plus * n.x, p0.y + s_plus * n.y);
        if (side(h, pm) == Side::Minus && side(h, pp) == Side::Plus) {
            r.yes = true;
            r.witness = std::make_pair(pm, pp);
        } else {
            // pole too close to the base segment end: report by search below
            r.exact = false;
        }
        if (r.exact || r.yes) return r;
    }

    SampleBudget b = budget;
    double sep = sp->dist(h.pole_center_point(), k.pole_center_point());
    b.reach = budget.reach + sep;
    CrossResult r = cross_search_points(h, sample_on_curtain(k, b));
    if (r.yes) return r;
    // symmetric search; an asymmetric hit is logged as a sampler artifact
    if (cross_search_points(k, sample_on_curtain(h, b)).yes) {
        CrossResult r2;
        r2.yes = true; // witness points live on h, so none are reported
        return r2;
    }
    return {};
}

DisjointEvidence disjoint_evidence(const Curtain& h, const Curtain& k,
                                   const SampleBudget& budget) {
    if (same_base(h, k)) {
        double gap = std::abs(h.r - k.r);
        return {gap > 1.0, true};
    }
    if (h.space()->kind() == SpaceKind::EuclideanPlane) {
        // parallel strips: compare foot intervals; transverse strips intersect
        Vec2 ah = h.base->a.v2(), bh = h.base->b.v2();
        Vec2 ak = k.base->a.v2(), bk = k.base->b.v2();
        Vec2 uh = (1.0 / h.base->length) * (bh - ah);
        Vec2 uk = (1.0 / k.base->length) * (bk - ak);
        if (std::abs(cross(uh, uk)) < 1e-12) {
            Vec2 p0{ak.x + k.r * uk.x, ak.y + k.r * uk.y};
            double f0 = dot(p0 - ah, uh);
            double flip = dot(uh, uk) >= 0 ? 1.0 : -1.0;
            (void)flip;
            return {std::abs(f0 - h.r) > 1.0, true};
        }
        return {false, true};
    }
    SampleBudget b = budget;
    b.reach = budget.reach + h.space()->dist(h.pole_center_point(), k.pole_center_point());
    for (const Point& p : sample_on_curtain(k, b))
        if (side(h, p) == Side::On) return {false, false};
    for (const Point& p : sample_on_curtain(h, b))
        if (side(k, p) == Side::On) return {false, false};
    return {true, false};
}

// ---------------------------------------------------------------------------

Chain dual_chain(const std::shared_ptr<const Geodesic>& g, double x_param, double y_param) {
    if (!g) throw Error(ErrorCode::BadInput, "dual_chain needs a base geodesic");
    if (y_param < x_param) std::swap(x_param, y_param);
    if (x_param < -1e-9 || y_param > g->length + 1e-9)
        throw Error(ErrorCode::BadInput, "subsegment outside the base parameter range");
    double d = y_param - x_param;
    if (d < 1.0 - 1e-12) throw Error(ErrorCode::TooShort, "dual_chain needs d >= 1");
    int n = (int)std::ceil(d) - 1;
    Chain chain;
    chain.cert = ChainCert::CommonBase;
    if (n <= 0) {
        chain.note = "empty chain: ceil(d) - 1 = 0";
        return chain;
    }
    double gap = (d - n) / (n + 1);
    for (int k = 1; k <= n; ++k) {
        double lo = x_param + (k - 1) * (1.0 + gap) + gap;
        chain.curtains.emplace_back(g, lo + 0.5);
    }
    std::ostringstream os;
    os << "dual_chain d=" << d << " n=" << n << " gap=" << gap;
    chain.note = os.str();
    return chain;
}

double crossing_parameter(const Curtain& h, const Geodesic& gamma, double param_tol) {
    Side s0 = side(h, gamma.a);
    Side s1 = side(h, gamma.b);
    if (s0 == Side::On) return 0;
    if (s1 == Side::On) return gamma.length;
    if (s0 == s1) throw Error(ErrorCode::BadInput, "crossing_parameter: endpoints on one side");
    double lo = 0, hi = gamma.length;
    Side lo_side = s0;
    while (hi - lo > param_tol) {
        double mid = 0.5 * (lo + hi);
        Side sm = side(h, gamma.eval(mid));
        if (sm == Side::On) return mid;
        if (sm == lo_side)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

ChainCheck is_chain(const std::vector<Curtain>& curtains, const SampleBudget& budget) {
    ChainCheck out;
    if (curtains.size() <= 1) {
        out.valid = true;
        out.cert = ChainCert::CommonBase;
        out.reason = "trivial";
        return out;
    }
    const Space* sp = curtains[0].space();
    for (const auto& c : curtains)
        if (c.space() != sp) throw Error(ErrorCode::MixedSpaces, "chain mixes spaces");

    bool common = true;
    for (std::size_t i = 1; i < curtains.size(); ++i)
        if (!same_base(curtains[0], curtains[i])) {
            common = false;
            break;
        }

    if (common) {
        // exact validation by the pole-gap rule; ordering must be monotone
        double dir = curtains[1].r - curtains[0].r;
        for (std::size_t i = 1; i < curtains.size(); ++i) {
            double step = curtains[i].r - curtains[i - 1].r;
            if (step * dir <= 0) {
                out.reason = "pole centers not monotone";
                return out;
            }
            if (std::abs(step) <= 1.0) {
                std::ostringstream os;
                os << "pole gap " << std::abs(step) << " not > 1 between " << (i - 1) << " and "
                   << i << " (closed curtains intersect)";
                out.reason = os.str();
                return out;
            }
        }
        out.valid = true;
        out.cert = ChainCert::CommonBase;
        out.reason = "common base, strict pole gaps";
        return out;
    }

    // general path: pairwise non-crossing and disjointness evidence, then a
    // sampled separation ordering for consecutive triples
    for (std::size_t i = 0; i < curtains.size(); ++i)
        for (std::size_t j = i + 1; j < curtains.size(); ++j) {
            if (crosses(curtains[i], curtains[j], budget).yes) {
                std::ostringstream os;
                os << "curtains " << i << " and " << j << " cross";
                out.reason = os.str();
                return out;
            }
            if (!disjoint_evidence(curtains[i], curtains[j], budget).disjoint) {
                std::ostringstream os;
                os << "no disjointness evidence for " << i << "," << j;
                out.reason = os.str();
                return out;
            }
        }
    for (std::size_t i = 1; i + 1 < curtains.size(); ++i) {
        auto prev_pts = sample_on_curtain(curtains[i - 1], budget);
        auto next_pts = sample_on_curtain(curtains[i + 1], budget);
        if (prev_pts.empty() || next_pts.empty()) {
            out.reason = "insufficient sampling evidence for separation ordering";
            return out;
        }
        Side want_prev = side(curtains[i], prev_pts[0]);
        if (want_prev == Side::On) {
            out.reason = "sampled point of neighbor lies on curtain";
            return out;
        }
        Side want_next = (want_prev == Side::Minus) ? Side::Plus : Side::Minus;
        for (const Point& p : prev_pts)
            if (side(curtains[i], p) != want_prev) {
                out.reason = "separation ordering violated (prev side mixed)";
                return out;
            }
        for (const Point& p : next_pts)
            if (side(curtains[i], p) != want_next) {
                out.reason = "separation ordering violated (next side mixed)";
                return out;
            }
    }
    out.valid = true;
    out.cert = ChainCert::General;
    out.reason = "sampled disjointness and separation ordering";
    return out;
}

} // namespace curtainlab
