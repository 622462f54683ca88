#include "curtainlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <sstream>

#include "curtainlab/polygon_mesh.hpp"

namespace curtainlab {

// ---------------------------------------------------------------------------

Point Geodesic::eval(double t) const { return space->geo_eval(*this, t); }

Geodesic make_geodesic(const Point& p, const Point& q) {
    if (!p.space || p.space != q.space)
        throw Error(ErrorCode::MixedSpaces, "geodesic endpoints in different spaces");
    return p.space->geodesic(p, q);
}

void Space::check_same_space(const Point& p, const Point& q) const {
    if (p.space != this || q.space != this)
        throw Error(ErrorCode::MixedSpaces, "points belong to different spaces");
}

std::uint64_t Space::descriptor_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : describe()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Projection solver: golden-section on the convex map t -> d(p, g(t)).

ProjResult project_solver(const Point& p, const Geodesic& g, double tol) {
    if (tol <= 0) throw Error(ErrorCode::BadInput, "projection tolerance must be positive");
    const Space* sp = g.space;
    if (g.length < 1e-12) return {0.0, sp->dist(p, g.a), true};
    auto f = [&](double t) { return sp->dist(p, g.eval(t)); };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0, hi = g.length;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    double t = 0.5 * (lo + hi);
    // endpoints can beat the interior midpoint when the minimum sits on the end
    double ft = f(t);
    if (f(0) <= ft) {
        t = 0;
        ft = f(0);
    }
    if (f(g.length) <= ft) {
        double fe = f(g.length);
        if (fe <= ft) {
            t = g.length;
            ft = fe;
        }
    }
    return {t, ft, false};
}

ProjResult project(const Point& p, const Geodesic& g, double tol) {
    if (p.space != g.space) throw Error(ErrorCode::MixedSpaces, "projection across spaces");
    if (g.length < 1e-12) return {0.0, g.space->dist(p, g.a), true};
    if (auto r = g.space->project_closed_form(p, g)) return *r;
    return project_solver(p, g, tol);
}

// ---------------------------------------------------------------------------
// Euclidean plane

void EuclideanPlane::validate(const Point& p) const {
    if (p.space != this || !std::holds_alternative<Vec2>(p.c))
        throw Error(ErrorCode::OutsideDomain, "not a plane point");
    Vec2 v = p.v2();
    if (!std::isfinite(v.x) || !std::isfinite(v.y))
        throw Error(ErrorCode::OutsideDomain, "non-finite plane coordinates");
}

double EuclideanPlane::dist(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Vec2 d = q.v2() - p.v2();
    return std::hypot(d.x, d.y);
}

Geodesic EuclideanPlane::geodesic(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Geodesic g;
    g.space = this;
    g.a = p;
    g.b = q;
    g.length = dist(p, q);
    return g;
}

Point EuclideanPlane::geo_eval(const Geodesic& g, double t) const {
    t = std::clamp(t, 0.0, g.length);
    if (g.length < 1e-300) return g.a;
    double s = t / g.length;
    Vec2 a = g.a.v2(), b = g.b.v2();
    return make(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y));
}

Point EuclideanPlane::sample_point(const Window& w, Rng& rng) const {
    return make(rng.uniform(-w.radius, w.radius), rng.uniform(-w.radius, w.radius));
}

std::optional<ProjResult> EuclideanPlane::project_closed_form(const Point& p,
                                                              const Geodesic& g) const {
    Vec2 a = g.a.v2(), b = g.b.v2(), z = p.v2();
    if (g.length < 1e-12) return ProjResult{0.0, dist(p, g.a), true};
    Vec2 u = (1.0 / g.length) * (b - a);
    double t = std::clamp(dot(z - a, u), 0.0, g.length);
    Vec2 foot{a.x + t * u.x, a.y + t * u.y};
    return ProjResult{t, std::hypot(z.x - foot.x, z.y - foot.y), false};
}

// ---------------------------------------------------------------------------
// Hyperbolic plane (upper half-plane chart)

Point HyperbolicPlane::make(double x, double y) const {
    if (!(y > 0)) throw Error(ErrorCode::OutsideDomain, "upper half-plane needs y > 0");
    return Point{this, Vec2{x, y}};
}

void HyperbolicPlane::validate(const Point& p) const {
    if (p.space != this || !std::holds_alternative<Vec2>(p.c))
        throw Error(ErrorCode::OutsideDomain, "not an h2 point");
    if (!(p.v2().y > 0)) throw Error(ErrorCode::OutsideDomain, "h2 chart requires y > 0");
}

double HyperbolicPlane::dist(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Vec2 a = p.v2(), b = q.v2();
    // 2 asinh(|z1-z2| / (2 sqrt(y1 y2))), stable for y spanning many decades
    double s = std::hypot(b.x - a.x, b.y - a.y) / (2.0 * std::sqrt(a.y) * std::sqrt(b.y));
    return 2.0 * std::asinh(s);
}

namespace {

// log-parameter of a semicircle point in the frame sending the circle to the
// positive imaginary axis: z = c + rho e^{i theta} -> log tan(theta/2)
double h2_arc_logparam(const H2Arc& arc, Vec2 z) {
    double c = 0.5 * (arc.mu_minus + arc.mu_plus);
    double theta = std::atan2(z.y, z.x - c);
    return std::log(std::tan(0.5 * theta));
}

Vec2 h2_arc_point(const H2Arc& arc, double s) {
    double c = 0.5 * (arc.mu_minus + arc.mu_plus);
    double rho = 0.5 * (arc.mu_plus - arc.mu_minus);
    double theta = 2.0 * std::atan(std::exp(s));
    return Vec2{c + rho * std::cos(theta), rho * std::sin(theta)};
}

} // namespace

Geodesic HyperbolicPlane::geodesic(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Vec2 a = p.v2(), b = q.v2();
    Geodesic g;
    g.space = this;
    g.a = p;
    g.b = q;
    g.length = dist(p, q);
    H2Arc arc;
    double scale = std::max({std::abs(a.x), std::abs(b.x), a.y, b.y, 1.0});
    if (std::abs(a.x - b.x) <= 1e-14 * scale) {
        arc.vertical = true;
        arc.x = a.x;
        arc.s0 = std::log(a.y);
        arc.dir = (b.y >= a.y) ? 1 : -1;
    } else {
        double c = (b.x * b.x + b.y * b.y - a.x * a.x - a.y * a.y) / (2.0 * (b.x - a.x));
        double rho = std::hypot(a.x - c, a.y);
        arc.vertical = false;
        arc.mu_minus = c - rho;
        arc.mu_plus = c + rho;
        arc.s0 = h2_arc_logparam(arc, a);
        double s1 = h2_arc_logparam(arc, b);
        arc.dir = (s1 >= arc.s0) ? 1 : -1;
    }
    g.payload = arc;
    return g;
}

Point HyperbolicPlane::geo_eval(const Geodesic& g, double t) const {
    t = std::clamp(t, 0.0, g.length);
    const H2Arc& arc = std::get<H2Arc>(g.payload);
    if (arc.vertical) {
        return Point{this, Vec2{arc.x, std::exp(arc.s0 + arc.dir * t)}};
    }
    Vec2 z = h2_arc_point(arc, arc.s0 + arc.dir * t);
    if (!(z.y > 0)) z.y = 1e-300;
    return Point{this, z};
}

Point HyperbolicPlane::sample_point(const Window& w, Rng& rng) const {
    double s = rng.uniform(0.0, w.radius);
    double lam = rng.uniform(-w.lateral, w.lateral);
    double y = std::exp(s);
    return make(lam * y, y);
}

std::optional<ProjResult> HyperbolicPlane::project_closed_form(const Point& p,
                                                               const Geodesic& g) const {
    if (g.length < 1e-12) return ProjResult{0.0, dist(p, g.a), true};
    const H2Arc& arc = std::get<H2Arc>(g.payload);
    Vec2 z = p.v2();
    double s_star;
    if (arc.vertical) {
        // foot on the full line x = x0 is (x0, |z - x0|)
        s_star = std::log(std::hypot(z.x - arc.x, z.y));
    } else {
        std::complex<double> zc(z.x, z.y);
        std::complex<double> w = (zc - arc.mu_plus) / (zc - arc.mu_minus);
        s_star = std::log(std::abs(w));
    }
    double t = arc.dir * (s_star - arc.s0);
    t = std::clamp(t, 0.0, g.length);
    return ProjResult{t, dist(p, g.eval(t)), false};
}

Geodesic HyperbolicPlane::axis_ray(double length) const {
    return geodesic(make(0, 1), make(0, std::exp(length)));
}

Geodesic HyperbolicPlane::perpendicular_at(double u, double length) const {
    // the semicircle |z| = e^u meets the y-axis orthogonally at (0, e^u)
    double R = std::exp(u);
    auto pt = [&](double v) {
        double theta = 2.0 * std::atan(std::exp(v));
        return make(R * std::cos(theta), R * std::sin(theta));
    };
    return geodesic(pt(-0.5 * length), pt(0.5 * length));
}

// ---------------------------------------------------------------------------
// Metric tree

MetricTree::MetricTree(int n_vertices, std::vector<std::array<int, 2>> edges,
                       std::vector<double> lengths)
    : n_(n_vertices), edges_(std::move(edges)), len_(std::move(lengths)) {
    if (n_ < 1 || edges_.size() != len_.size() || (int)edges_.size() != n_ - 1)
        throw Error(ErrorCode::BadInput, "tree needs n-1 edges");
    for (double l : len_)
        if (!(l > 0)) throw Error(ErrorCode::BadInput, "tree edge lengths must be positive");
    adj_.assign(n_, {});
    for (int e = 0; e < (int)edges_.size(); ++e) {
        auto [u, v] = edges_[e];
        if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v)
            throw Error(ErrorCode::BadInput, "bad tree edge");
        adj_[u].push_back({v, e});
        adj_[v].push_back({u, e});
    }
    vd_.assign(n_, std::vector<double>(n_, 0));
    next_.assign(n_, std::vector<int>(n_, -1));
    for (int s = 0; s < n_; ++s) {
        std::vector<char> seen(n_, 0);
        std::deque<int> queue{s};
        seen[s] = 1;
        next_[s][s] = s;
        int visited = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            ++visited;
            for (auto [v, e] : adj_[u]) {
                if (seen[v]) continue;
                seen[v] = 1;
                vd_[s][v] = vd_[s][u] + len_[e];
                // first hop from s toward v goes the same way as toward u,
                // unless u is s itself
                next_[s][v] = (u == s) ? v : next_[s][u];
                queue.push_back(v);
            }
        }
        if (visited != n_) throw Error(ErrorCode::BadInput, "tree is not connected");
    }
}

std::string MetricTree::describe() const {
    std::ostringstream os;
    os << "tree(n=" << n_;
    for (int e = 0; e < (int)edges_.size(); ++e)
        os << ";" << edges_[e][0] << "-" << edges_[e][1] << ":" << len_[e];
    os << ")";
    return os.str();
}

Point MetricTree::vertex_point(int v) const {
    if (v < 0 || v >= n_) throw Error(ErrorCode::BadInput, "vertex out of range");
    for (int e = 0; e < (int)edges_.size(); ++e) {
        if (edges_[e][0] == v) return edge_point(e, 0);
        if (edges_[e][1] == v) return edge_point(e, len_[e]);
    }
    throw Error(ErrorCode::BadInput, "isolated vertex");
}

void MetricTree::validate(const Point& p) const {
    if (p.space != this || !std::holds_alternative<TreePos>(p.c))
        throw Error(ErrorCode::OutsideDomain, "not a tree point");
    const TreePos& t = p.tp();
    if (t.edge < 0 || t.edge >= (int)edges_.size())
        throw Error(ErrorCode::OutsideDomain, "tree edge id out of range");
    if (t.off < -1e-9 || t.off > len_[t.edge] + 1e-9)
        throw Error(ErrorCode::OutsideDomain, "offset outside edge");
}

struct TreeOps {
    // distance from a point to both endpoints of its edge
    static std::array<std::pair<int, double>, 2> anchors(const MetricTree& T, const TreePos& p) {
        return {{{T.edges_[p.edge][0], p.off}, {T.edges_[p.edge][1], T.len_[p.edge] - p.off}}};
    }

    static int edge_between(const MetricTree& T, int u, int v) {
        for (auto [w, e] : T.adj_[u])
            if (w == v) return e;
        throw Error(ErrorCode::BadInput, "vertices not adjacent");
    }
};

double MetricTree::dist(const Point& p, const Point& q) const {
    check_same_space(p, q);
    const TreePos& a = p.tp();
    const TreePos& b = q.tp();
    if (a.edge == b.edge) return std::abs(a.off - b.off);
    double best = 1e300;
    for (auto [va, ca] : TreeOps::anchors(*this, a))
        for (auto [vb, cb] : TreeOps::anchors(*this, b)) best = std::min(best, ca + vd_[va][vb] + cb);
    return best;
}

Geodesic MetricTree::geodesic(const Point& p, const Point& q) const {
    check_same_space(p, q);
    const TreePos& a = p.tp();
    const TreePos& b = q.tp();
    Geodesic g;
    g.space = this;
    g.a = p;
    g.b = q;
    TreePath path;
    if (a.edge == b.edge) {
        path.legs.push_back({a.edge, a.off, b.off});
        g.length = std::abs(a.off - b.off);
        g.payload = std::move(path);
        return g;
    }
    // pick the exit/entry anchors that realize the distance
    double best = 1e300;
    int va_best = -1, vb_best = -1;
    double ca_best = 0, cb_best = 0;
    for (auto [va, ca] : TreeOps::anchors(*this, a))
        for (auto [vb, cb] : TreeOps::anchors(*this, b)) {
            double d = ca + vd_[va][vb] + cb;
            if (d < best) {
                best = d;
                va_best = va;
                vb_best = vb;
                ca_best = ca;
                cb_best = cb;
            }
        }
    g.length = best;
    // leg out of a's edge
    double exit_off = (edges_[a.edge][0] == va_best) ? 0.0 : len_[a.edge];
    if (std::abs(exit_off - a.off) > 1e-15) path.legs.push_back({a.edge, a.off, exit_off});
    // vertex-to-vertex walk
    int u = va_best;
    while (u != vb_best) {
        int v = next_[u][vb_best];
        int e = TreeOps::edge_between(*this, u, v);
        double from = (edges_[e][0] == u) ? 0.0 : len_[e];
        double to = (edges_[e][0] == u) ? len_[e] : 0.0;
        path.legs.push_back({e, from, to});
        u = v;
    }
    double enter_off = (edges_[b.edge][0] == vb_best) ? 0.0 : len_[b.edge];
    if (std::abs(enter_off - b.off) > 1e-15) path.legs.push_back({b.edge, enter_off, b.off});
    (void)ca_best;
    (void)cb_best;
    g.payload = std::move(path);
    return g;
}

Point MetricTree::geo_eval(const Geodesic& g, double t) const {
    t = std::clamp(t, 0.0, g.length);
    const TreePath& path = std::get<TreePath>(g.payload);
    if (path.legs.empty()) return g.a;
    double acc = 0;
    for (const auto& leg : path.legs) {
        double l = std::abs(leg.to - leg.from);
        if (t <= acc + l + 1e-12) {
            double s = std::clamp(t - acc, 0.0, l);
            double off = leg.from + (leg.to >= leg.from ? s : -s);
            return edge_point(leg.edge, std::clamp(off, 0.0, len_[leg.edge]));
        }
        acc += l;
    }
    return g.b;
}

Point MetricTree::sample_point(const Window&, Rng& rng) const {
    int e = (int)rng.next_below(edges_.size());
    return edge_point(e, rng.uniform(0.0, len_[e]));
}

std::optional<ProjResult> MetricTree::project_closed_form(const Point& p,
                                                          const Geodesic& g) const {
    if (g.length < 1e-12) return ProjResult{0.0, dist(p, g.a), true};
    // in a tree the gate point satisfies d(p,a) - d(p,b) = 2 t* - L
    double t = 0.5 * (dist(p, g.a) + g.length - dist(p, g.b));
    t = std::clamp(t, 0.0, g.length);
    return ProjResult{t, dist(p, g.eval(t)), false};
}

std::shared_ptr<MetricTree> make_tripod(double leg_a, double leg_b, double leg_c) {
    return std::make_shared<MetricTree>(
        4, std::vector<std::array<int, 2>>{{0, 1}, {0, 2}, {0, 3}},
        std::vector<double>{leg_a, leg_b, leg_c});
}

// ---------------------------------------------------------------------------
// l2 product

ProductSpace::ProductSpace(std::vector<std::shared_ptr<const Space>> factors)
    : factors_(std::move(factors)) {
    if (factors_.size() < 2) throw Error(ErrorCode::BadInput, "product needs >= 2 factors");
}

std::string ProductSpace::describe() const {
    std::string s = "product(";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += ",";
        s += factors_[i]->describe();
    }
    return s + ")";
}

Point ProductSpace::make(std::vector<Point> parts) const {
    if (parts.size() != factors_.size())
        throw Error(ErrorCode::BadInput, "wrong factor count for product point");
    auto pp = std::make_shared<ProductPos>();
    pp->parts = std::move(parts);
    return Point{this, pp};
}

Point ProductSpace::basepoint() const {
    std::vector<Point> parts;
    for (auto& f : factors_) parts.push_back(f->basepoint());
    return make(std::move(parts));
}

void ProductSpace::validate(const Point& p) const {
    if (p.space != this || !std::holds_alternative<std::shared_ptr<ProductPos>>(p.c))
        throw Error(ErrorCode::OutsideDomain, "not a product point");
    const auto& parts = p.pp().parts;
    if (parts.size() != factors_.size())
        throw Error(ErrorCode::OutsideDomain, "wrong product arity");
    for (std::size_t i = 0; i < parts.size(); ++i) factors_[i]->validate(parts[i]);
}

double ProductSpace::dist(const Point& p, const Point& q) const {
    check_same_space(p, q);
    double s = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        double d = factors_[i]->dist(p.pp().parts[i], q.pp().parts[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

Geodesic ProductSpace::geodesic(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Geodesic g;
    g.space = this;
    g.a = p;
    g.b = q;
    ProductPath path;
    double s = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        auto fg = std::make_shared<Geodesic>(
            factors_[i]->geodesic(p.pp().parts[i], q.pp().parts[i]));
        s += fg->length * fg->length;
        path.factors.push_back(std::move(fg));
    }
    g.length = std::sqrt(s);
    g.payload = std::move(path);
    return g;
}

Point ProductSpace::geo_eval(const Geodesic& g, double t) const {
    t = std::clamp(t, 0.0, g.length);
    const ProductPath& path = std::get<ProductPath>(g.payload);
    std::vector<Point> parts;
    double frac = (g.length > 1e-300) ? t / g.length : 0.0;
    for (auto& fg : path.factors) parts.push_back(fg->eval(frac * fg->length));
    return make(std::move(parts));
}

Point ProductSpace::sample_point(const Window& w, Rng& rng) const {
    std::vector<Point> parts;
    for (auto& f : factors_) parts.push_back(f->sample_point(w, rng));
    return make(std::move(parts));
}

// ---------------------------------------------------------------------------
// Polygon domain

PolygonDomain::PolygonDomain(std::vector<Vec2> boundary_ccw, std::string tag)
    : boundary_(std::move(boundary_ccw)), tag_(std::move(tag)) {
    mesh_ = std::make_unique<PolygonMesh>(boundary_);
}

PolygonDomain::~PolygonDomain() = default;

std::string PolygonDomain::describe() const {
    std::ostringstream os;
    os << tag_ << "(v=" << boundary_.size();
    for (auto& p : boundary_) os << ";" << p.x << "," << p.y;
    os << ")";
    return os.str();
}

bool PolygonDomain::contains(Vec2 v, double tol) const { return mesh_->contains(v, tol); }

void PolygonDomain::validate(const Point& p) const {
    if (p.space != this || !std::holds_alternative<Vec2>(p.c))
        throw Error(ErrorCode::OutsideDomain, "not a polygon point");
    if (!contains(p.v2(), 1e-9)) throw Error(ErrorCode::OutsideDomain, "point outside region");
}

Polyline PolygonDomain::shortest_path(Vec2 a, Vec2 b) const { return mesh_->shortest_path(a, b); }

double PolygonDomain::dist(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Polyline pl = mesh_->shortest_path(p.v2(), q.v2());
    return pl.cum.back();
}

Geodesic PolygonDomain::geodesic(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Geodesic g;
    g.space = this;
    g.a = p;
    g.b = q;
    Polyline pl = mesh_->shortest_path(p.v2(), q.v2());
    g.length = pl.cum.back();
    g.payload = std::move(pl);
    return g;
}

Point PolygonDomain::geo_eval(const Geodesic& g, double t) const {
    t = std::clamp(t, 0.0, g.length);
    const Polyline& pl = std::get<Polyline>(g.payload);
    auto it = std::upper_bound(pl.cum.begin(), pl.cum.end(), t);
    std::size_t i = std::min<std::size_t>(pl.cum.size() - 1,
                                          (std::size_t)std::max<std::ptrdiff_t>(1, it - pl.cum.begin()));
    double seg = pl.cum[i] - pl.cum[i - 1];
    double s = (seg > 1e-300) ? (t - pl.cum[i - 1]) / seg : 0.0;
    Vec2 a = pl.pts[i - 1], b = pl.pts[i];
    return Point{this, Vec2{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)}};
}

Point PolygonDomain::sample_point(const Window& w, Rng& rng) const {
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (auto& p : boundary_) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    if (w.radius > 0) x1 = std::min(x1, x0 + w.radius);
    for (int tries = 0; tries < 4000; ++tries) {
        Vec2 v{rng.uniform(x0, x1), rng.uniform(y0, y1)};
        if (contains(v, -1e-9)) return Point{this, v};
    }
    throw Error(ErrorCode::BadInput, "rejection sampling failed (degenerate region?)");
}

// ---------------------------------------------------------------------------
// Strip construction

double StripModel::span_height_limit(double x_lo, double x_hi) const {
    // A horizontal band component spanning strictly past [x_lo, x_hi] must
    // traverse every curve-limited stretch it overlaps; the curve is
    // increasing, so each stretch binds at its left end.
    double limit = H - 1.0; // pole center ceiling is H - 1/2 inside columns
    for (const auto& L : lows) {
        if (L.x_hi <= x_lo || L.x_lo >= x_hi) continue;
        limit = std::min(limit, curve(std::max(L.x_lo, x_lo)));
    }
    return limit;
}

int StripModel::witness_count(double x_lo, double x_hi) const {
    // pole centers live in [1/2, limit + 1/2] with strict gaps > 1
    double limit = span_height_limit(x_lo, x_hi);
    if (limit <= 1e-12) return 0;
    return std::max(0, (int)std::ceil(limit - 1e-9));
}

double StripModel::ceiling_at(double x) const {
    for (const auto& L : lows) {
        if (x < L.x_lo || x > L.x_hi) continue;
        const auto& c = L.ceiling;
        for (std::size_t i = 1; i < c.size(); ++i) {
            if (x <= c[i].x + 1e-15) {
                double w = c[i].x - c[i - 1].x;
                double s = (w > 1e-300) ? (x - c[i - 1].x) / w : 0.0;
                return c[i - 1].y + s * (c[i].y - c[i - 1].y);
            }
        }
        return c.back().y;
    }
    return H;
}

bool StripModel::segment_inside(Vec2 p, Vec2 q) const {
    double x0 = std::min(p.x, q.x), x1 = std::max(p.x, q.x);
    if (x0 < -1e-12 || x1 > x_max + 1e-12) return false;
    if (std::min(p.y, q.y) < -1e-12) return false;
    if (std::max(p.y, q.y) > H + 1e-12) return false;
    auto y_at = [&](double x) {
        if (std::abs(q.x - p.x) < 1e-300) return std::max(p.y, q.y);
        return p.y + (q.y - p.y) * (x - p.x) / (q.x - p.x);
    };
    // per low interval, (ceiling - segment) is concave, so the endpoint
    // checks of the overlap decide containment exactly
    for (const auto& L : lows) {
        double u = std::max(x0, L.x_lo), v = std::min(x1, L.x_hi);
        if (u > v) continue;
        if (y_at(u) > ceiling_at(u) + 1e-12) return false;
        if (y_at(v) > ceiling_at(v) + 1e-12) return false;
    }
    return true;
}

StripSpace::StripSpace(std::vector<Vec2> boundary, StripModel model, std::string tag)
    : PolygonDomain(std::move(boundary), std::move(tag)), model_(std::move(model)) {}

double StripSpace::dist(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Vec2 a = p.v2(), b = q.v2();
    if (model_.segment_inside(a, b)) return std::hypot(b.x - a.x, b.y - a.y);
    return PolygonDomain::dist(p, q);
}

Geodesic StripSpace::geodesic(const Point& p, const Point& q) const {
    check_same_space(p, q);
    Vec2 a = p.v2(), b = q.v2();
    if (model_.segment_inside(a, b)) {
        Geodesic g;
        g.space = this;
        g.a = p;
        g.b = q;
        g.length = std::hypot(b.x - a.x, b.y - a.y);
        Polyline pl;
        pl.pts = {a, b};
        pl.cum = {0.0, g.length};
        g.payload = std::move(pl);
        return g;
    }
    return PolygonDomain::geodesic(p, q);
}

std::optional<ProjResult> StripSpace::project_closed_form(const Point& p,
                                                          const Geodesic& g) const {
    // the x-axis projects by dropping x: the region is y-downward closed and
    // the euclidean lower bound is realized by the vertical segment
    Vec2 a = g.a.v2(), b = g.b.v2();
    if (std::abs(a.y) > 1e-12 || std::abs(b.y) > 1e-12) return std::nullopt;
    if (g.length < 1e-12) return ProjResult{0.0, dist(p, g.a), true};
    double x0 = std::min(a.x, b.x), x1 = std::max(a.x, b.x);
    Vec2 z = p.v2();
    double foot_x = std::clamp(z.x, x0, x1);
    double t = (b.x >= a.x) ? foot_x - a.x : a.x - foot_x;
    double d = (foot_x == z.x) ? z.y : dist(p, Point{this, Vec2{foot_x, 0.0}});
    return ProjResult{t, d, false};
}

std::shared_ptr<StripSpace> StripSpace::example51(int i_max, double H) {
    if (i_max < 1) throw Error(ErrorCode::BadInput, "example51 needs i_max >= 1");
    std::vector<double> centers;
    for (int j = 1; j <= i_max; ++j) centers.push_back((double)j * j);
    auto curve = [](double x) { return std::sqrt(std::max(0.0, x)); };
    return with_valleys(centers, curve, H, (double)(i_max + 1) * (i_max + 1) - 0.5, 9);
}

std::shared_ptr<StripSpace> StripSpace::with_valleys(std::vector<double> centers,
                                                     const std::function<double(double)>& curve,
                                                     double H, double x_max,
                                                     int samples_per_valley) {
    if (centers.empty()) throw Error(ErrorCode::BadInput, "need at least one valley");
    if (H < 1) throw Error(ErrorCode::TruncationTooLow, "strip truncation height must be >= 1");
    std::sort(centers.begin(), centers.end());
    for (std::size_t k = 0; k + 1 < centers.size(); ++k)
        if (centers[k + 1] - centers[k] < 2.0)
            throw Error(ErrorCode::BadInput, "valleys too close; columns need positive width");
    if (x_max < centers.back() + 1.5)
        throw Error(ErrorCode::BadInput, "x_max must leave room after the last valley");
    for (double c : centers)
        if (curve(c + 0.5) >= H)
            throw Error(ErrorCode::TruncationTooLow, "curve exceeds truncation height at a valley");

    StripModel model;
    model.H = H;
    model.x_max = x_max;
    // the region left of the first column is curve-limited from x = 0
    model.lows.push_back({0.0, centers[0] + 0.5, {}});
    for (std::size_t k = 1; k < centers.size(); ++k)
        model.lows.push_back({centers[k] - 0.5, centers[k] + 0.5, {}});
    model.valley_centers = centers;
    model.curve = curve;
    int mm = std::max(2, samples_per_valley);
    for (auto& L : model.lows) {
        for (int s = 0; s <= mm; ++s) {
            double x = L.x_lo + (L.x_hi - L.x_lo) * ((double)s / mm);
            L.ceiling.push_back({x, curve(x)});
        }
    }

    // boundary, counterclockwise
    std::vector<Vec2> pts;
    pts.push_back({0, 0});
    pts.push_back({x_max, 0});
    pts.push_back({x_max, H});
    // walk the top right-to-left: column tops at H, valleys along the curve
    for (int k = (int)model.lows.size() - 1; k >= 0; --k) {
        double lo = model.lows[k].x_lo, hi = model.lows[k].x_hi;
        pts.push_back({hi, H});
        pts.push_back({hi, curve(hi)}); // reflex corner on the curve
        int m = std::max(2, samples_per_valley);
        for (int s = 1; s < m; ++s) {
            double x = hi + (lo - hi) * ((double)s / m);
            pts.push_back({x, curve(x)});
        }
        double h_lo = curve(lo);
        if (k > 0) {
            pts.push_back({lo, h_lo});
            pts.push_back({lo, H});
        } else {
            // leftmost piece ends on the y-axis (or at the origin)
            if (std::abs(lo) > 1e-12) throw Error(ErrorCode::BadInput, "first low interval must start at 0");
            if (h_lo > 1e-12) pts.push_back({lo, h_lo});
        }
    }
    struct Concrete : StripSpace {
        Concrete(std::vector<Vec2> b, StripModel m, std::string t)
            : StripSpace(std::move(b), std::move(m), std::move(t)) {}
    };
    return std::make_shared<Concrete>(std::move(pts), std::move(model), "strip");
}

// ---------------------------------------------------------------------------
// Figure-2 band space: two tall blocks joined by a height-limited middle band

std::shared_ptr<PolygonDomain> make_figure2_space(Fig2Model& out_model) {
    const double block_w = 6, mid_w = 6, band_h = 4.75, total_h = 12;
    const double x1 = block_w, x2 = block_w + mid_w;
    const double W = x2 + block_w;
    const double y0 = 0.5 * (total_h - band_h), y1 = y0 + band_h;
    out_model.band_y0 = y0;
    out_model.band_y1 = y1;
    out_model.bridge_x0 = x1;
    out_model.bridge_x1 = x2;
    out_model.width = W;
    out_model.height = total_h;
    std::vector<Vec2> pts = {
        {0, 0},  {x1, 0},      {x1, y0}, {x2, y0}, {x2, 0},  {W, 0},
        {W, total_h}, {x2, total_h}, {x2, y1}, {x1, y1}, {x1, total_h}, {0, total_h},
    };
    auto sp = std::make_shared<PolygonDomain>(std::move(pts), "figure2");
    sp->set_basepoint({1.0, total_h / 2});
    return sp;
}

} // namespace curtainlab
