#include "curtainlab/polygon_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace curtainlab {

namespace {

double triarea2(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool veq(Vec2 a, Vec2 b, double tol = 1e-12) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

double seg_len(Vec2 a, Vec2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

} // namespace

PolygonMesh::PolygonMesh(const std::vector<Vec2>& boundary_ccw) {
    if (boundary_ccw.size() < 3) throw Error(ErrorCode::BadInput, "polygon needs >= 3 vertices");
    double area2 = 0;
    for (std::size_t i = 0; i < boundary_ccw.size(); ++i) {
        Vec2 a = boundary_ccw[i];
        Vec2 b = boundary_ccw[(i + 1) % boundary_ccw.size()];
        area2 += cross(a, b);
    }
    if (area2 <= 0) throw Error(ErrorCode::BadInput, "polygon boundary must be CCW and non-degenerate");
    pts_ = boundary_ccw;
    triangulate(boundary_ccw);
    build_adjacency();
    build_index();
}

void PolygonMesh::triangulate(const std::vector<Vec2>& poly) {
    const int n = (int)poly.size();
    std::vector<int> next(n), prev(n);
    for (int i = 0; i < n; ++i) {
        next[i] = (i + 1) % n;
        prev[i] = (i + n - 1) % n;
    }
    auto is_reflex = [&](int i) {
        return triarea2(poly[prev[i]], poly[i], poly[next[i]]) <= 1e-14;
    };
    std::vector<char> reflex(n);
    for (int i = 0; i < n; ++i) reflex[i] = is_reflex(i);

    auto in_tri_strict = [&](Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
        double d1 = triarea2(a, b, p), d2 = triarea2(b, c, p), d3 = triarea2(c, a, p);
        return d1 > -1e-14 && d2 > -1e-14 && d3 > -1e-14;
    };
    auto is_ear = [&](int i) {
        if (reflex[i]) return false;
        Vec2 a = poly[prev[i]], b = poly[i], c = poly[next[i]];
        if (std::abs(triarea2(a, b, c)) < 1e-14) return false;
        for (int j = 0; j < n; ++j) {
            if (!reflex[j]) continue;
            if (j == prev[i] || j == i || j == next[i]) continue;
            // skip vertices already clipped away
            if (next[prev[j]] != j) continue;
            if (in_tri_strict(a, b, c, poly[j])) return false;
        }
        return true;
    };

    int remaining = n;
    int cur = 0;
    int guard = 0;
    while (remaining > 3) {
        if (++guard > 4 * n * n) throw Error(ErrorCode::BadInput, "triangulation failed (non-simple polygon?)");
        if (is_ear(cur)) {
            Tri t{};
            t.v[0] = prev[cur];
            t.v[1] = cur;
            t.v[2] = next[cur];
            tris_.push_back(t);
            int p = prev[cur], q = next[cur];
            next[p] = q;
            prev[q] = p;
            --remaining;
            reflex[p] = is_reflex(p);
            reflex[q] = is_reflex(q);
            cur = q;
        } else {
            cur = next[cur];
        }
    }
    Tri t{};
    t.v[0] = cur;
    t.v[1] = next[cur];
    t.v[2] = next[next[cur]];
    tris_.push_back(t);
}

void PolygonMesh::build_adjacency() {
    std::map<std::pair<int, int>, std::pair<int, int>> edge_owner; // undirected edge -> (tri, slot)
    for (auto& t : tris_) {
        t.nbr[0] = t.nbr[1] = t.nbr[2] = -1;
        t.xmin = std::min({pts_[t.v[0]].x, pts_[t.v[1]].x, pts_[t.v[2]].x});
        t.xmax = std::max({pts_[t.v[0]].x, pts_[t.v[1]].x, pts_[t.v[2]].x});
    }
    for (int ti = 0; ti < (int)tris_.size(); ++ti) {
        for (int s = 0; s < 3; ++s) {
            int a = tris_[ti].v[s], b = tris_[ti].v[(s + 1) % 3];
            auto key = std::minmax(a, b);
            auto it = edge_owner.find(key);
            if (it == edge_owner.end()) {
                edge_owner[key] = {ti, s};
            } else {
                tris_[ti].nbr[s] = it->second.first;
                tris_[it->second.first].nbr[it->second.second] = ti;
            }
        }
    }
}

void PolygonMesh::build_index() {
    bx0_ = 1e300;
    bx1_ = -1e300;
    for (auto& p : pts_) {
        bx0_ = std::min(bx0_, p.x);
        bx1_ = std::max(bx1_, p.x);
    }
    nbuckets_ = std::max(1, (int)std::min<std::size_t>(256, tris_.size()));
    buckets_.assign(nbuckets_, {});
    double w = std::max(bx1_ - bx0_, 1e-9);
    for (int ti = 0; ti < (int)tris_.size(); ++ti) {
        int lo = (int)std::floor((tris_[ti].xmin - bx0_) / w * nbuckets_);
        int hi = (int)std::floor((tris_[ti].xmax - bx0_) / w * nbuckets_);
        lo = std::clamp(lo, 0, nbuckets_ - 1);
        hi = std::clamp(hi, 0, nbuckets_ - 1);
        for (int b = lo; b <= hi; ++b) buckets_[b].push_back(ti);
    }
}

bool PolygonMesh::point_in_tri(int t, Vec2 p, double tol) const {
    Vec2 a = pts_[tris_[t].v[0]], b = pts_[tris_[t].v[1]], c = pts_[tris_[t].v[2]];
    double scale = std::max({std::abs(triarea2(a, b, c)), 1.0});
    double d1 = triarea2(a, b, p), d2 = triarea2(b, c, p), d3 = triarea2(c, a, p);
    double lim = -tol * std::sqrt(scale);
    return d1 >= lim && d2 >= lim && d3 >= lim;
}

int PolygonMesh::locate(Vec2 p, double tol) const {
    if (p.x < bx0_ - tol || p.x > bx1_ + tol) return -1;
    double w = std::max(bx1_ - bx0_, 1e-9);
    int b = std::clamp((int)std::floor((p.x - bx0_) / w * nbuckets_), 0, nbuckets_ - 1);
    for (int ti : buckets_[b])
        if (point_in_tri(ti, p, tol)) return ti;
    // tolerance retry across all triangles for boundary-grazing points
    for (int ti = 0; ti < (int)tris_.size(); ++ti)
        if (point_in_tri(ti, p, tol)) return ti;
    return -1;
}

bool PolygonMesh::contains(Vec2 p, double tol) const { return locate(p, tol) >= 0; }

std::vector<int> PolygonMesh::tri_path(int from, int to) const {
    std::vector<int> parent(tris_.size(), -2);
    std::deque<int> queue{from};
    parent[from] = -1;
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        if (t == to) break;
        for (int s = 0; s < 3; ++s) {
            int nb = tris_[t].nbr[s];
            if (nb >= 0 && parent[nb] == -2) {
                parent[nb] = t;
                queue.push_back(nb);
            }
        }
    }
    std::vector<int> path;
    for (int t = to; t != -1; t = parent[t]) {
        if (t == -2) throw Error(ErrorCode::BadInput, "disconnected triangulation");
        path.push_back(t);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Polyline PolygonMesh::shortest_path(Vec2 a, Vec2 b) const {
    int ta = locate(a), tb = locate(b);
    if (ta < 0 || tb < 0) throw Error(ErrorCode::OutsideDomain, "endpoint outside polygon domain");

    std::vector<Vec2> left{a}, right{a};
    if (ta != tb) {
        auto path = tri_path(ta, tb);
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const Tri& t = tris_[path[i]];
            int s = 0;
            while (s < 3 && t.nbr[s] != path[i + 1]) ++s;
            // interior of the exited triangle lies left of (v[s] -> v[s+1]),
            // so the walker's left hand lands on v[s+1]
            left.push_back(pts_[t.v[(s + 1) % 3]]);
            right.push_back(pts_[t.v[s]]);
        }
    }
    left.push_back(b);
    right.push_back(b);

    // funnel / string pulling
    std::vector<Vec2> out;
    Vec2 apex = a, pl = a, pr = a;
    int apex_i = 0, left_i = 0, right_i = 0;
    out.push_back(a);
    const double eps = 1e-12;
    long guard = 0;
    const long guard_max = 8L * (long)left.size() * (long)left.size() + 64;
    for (int i = 1; i < (int)left.size(); ++i) {
        if (++guard > guard_max) throw Error(ErrorCode::BadInput, "funnel did not converge");
        Vec2 l = left[i], r = right[i];
        // new left tightens when the current left lies left of apex -> l
        if (triarea2(apex, l, pl) >= -eps) {
            if (veq(apex, pl) || triarea2(apex, pr, l) > eps) {
                pl = l;
                left_i = i;
            } else {
                // left swept over right: the right point is a path corner
                out.push_back(pr);
                apex = pr;
                apex_i = right_i;
                pl = apex;
                pr = apex;
                left_i = right_i = apex_i;
                i = apex_i;
                continue;
            }
        }
        if (triarea2(apex, pr, r) >= -eps) {
            if (veq(apex, pr) || triarea2(apex, r, pl) > eps) {
                pr = r;
                right_i = i;
            } else {
                out.push_back(pl);
                apex = pl;
                apex_i = left_i;
                pl = apex;
                pr = apex;
                left_i = right_i = apex_i;
                i = apex_i;
                continue;
            }
        }
    }
    out.push_back(b);

    Polyline pline;
    pline.pts.reserve(out.size());
    for (auto& p : out) {
        if (!pline.pts.empty() && veq(pline.pts.back(), p, 1e-12)) continue;
        pline.pts.push_back(p);
    }
    if (pline.pts.size() == 1) pline.pts.push_back(pline.pts[0]);
    pline.cum.resize(pline.pts.size());
    pline.cum[0] = 0;
    for (std::size_t i = 1; i < pline.pts.size(); ++i)
        pline.cum[i] = pline.cum[i - 1] + seg_len(pline.pts[i - 1], pline.pts[i]);
    return pline;
}

} // namespace curtainlab
