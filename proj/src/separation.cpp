#include "curtainlab/separation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace curtainlab {

namespace {

std::uint64_t fnv64(std::uint64_t h, const void* data, std::size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

bool same_geodesic(const Geodesic& x, const Geodesic& y) {
    if (&x == &y) return true;
    if (x.space != y.space) return false;
    if (std::abs(x.length - y.length) > 1e-12) return false;
    return x.space->dist(x.a, y.a) < 1e-12 && x.space->dist(x.b, y.b) < 1e-12;
}

// max subset of sorted pole centers with strict gaps > 1 (activity selection)
int packed_count(std::vector<double>& rs) {
    std::sort(rs.begin(), rs.end());
    int count = 0;
    double last = -1e300;
    for (double r : rs) {
        if (r - last > 1.0) {
            ++count;
            last = r;
        }
    }
    return count;
}

[[maybe_unused]] static std::vector<double> packed_pick(std::vector<double>& rs) {
    std::sort(rs.begin(), rs.end());
    std::vector<double> out;
    double last = -1e300;
    for (double r : rs) {
        if (r - last > 1.0) {
            out.push_back(r);
            last = r;
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// pools

Curtain CurtainPool::curtain(std::size_t i) const {
    const PoolEntry& e = entries.at(i);
    bool boundary_ok = family != PoolFamily::Sampled;
    return Curtain(probes.at(e.probe), e.r, 1e-6, boundary_ok);
}

std::uint64_t CurtainPool::id() const {
    std::uint64_t h = 1469598103934665603ULL;
    std::uint64_t sh = space ? space->descriptor_hash() : 0;
    h = fnv64(h, &sh, 8);
    h = fnv64(h, &density, 8);
    int fam = (int)family;
    h = fnv64(h, &fam, 4);
    std::uint64_t n = entries.size();
    h = fnv64(h, &n, 8);
    for (const auto& e : entries) {
        h = fnv64(h, &e.probe, 4);
        h = fnv64(h, &e.r, 8);
    }
    return h;
}

CurtainPool build_pool(const Space& space,
                       std::vector<std::shared_ptr<const Geodesic>> probes, double density,
                       std::size_t cap) {
    if (density <= 0) throw Error(ErrorCode::BadInput, "pool density must be positive");
    CurtainPool pool;
    pool.space = &space;
    pool.probes = std::move(probes);
    pool.density = density;
    pool.cap = cap;
    for (std::int32_t pi = 0; pi < (std::int32_t)pool.probes.size(); ++pi) {
        const Geodesic& g = *pool.probes[pi];
        if (g.space != &space) throw Error(ErrorCode::MixedSpaces, "probe from another space");
        for (double r = 0.5 + density; r + 0.5 < g.length - 1e-9; r += density) {
            if (pool.entries.size() >= cap)
                throw Error(ErrorCode::BadInput, "pool cap exceeded; raise cap or thin probes");
            pool.entries.push_back({pi, r});
        }
    }
    return pool;
}

CurtainPool build_strip_axis_pool(const StripSpace& space, double density, double t_hi,
                                  std::size_t cap) {
    if (density <= 0) throw Error(ErrorCode::BadInput, "pool density must be positive");
    const StripModel& m = space.model();
    double end = std::min(t_hi + 2.0, m.x_max - 1e-6);
    auto axis = std::make_shared<Geodesic>(
        space.geodesic(space.make(0, 0), space.make(end, 0)));
    CurtainPool pool;
    pool.space = &space;
    pool.probes = {axis};
    pool.density = density;
    pool.cap = cap;
    pool.family = PoolFamily::StripAxis;
    pool.strip = &m;
    for (double r = 0.5 + density; r + 0.5 < axis->length - 1e-9; r += density) {
        if (pool.entries.size() >= cap)
            throw Error(ErrorCode::BadInput, "pool cap exceeded; raise cap or shorten axis");
        pool.entries.push_back({0, r});
    }
    return pool;
}

CurtainPool build_fig2_pool(const PolygonDomain& space, const Fig2Model& model, double spacing,
                            std::size_t cap) {
    double xc = 0.5 * (model.bridge_x0 + model.bridge_x1);
    auto vbase = std::make_shared<Geodesic>(space.geodesic(
        space.make(xc, model.band_y0), space.make(xc, model.band_y1)));
    CurtainPool pool;
    pool.space = &space;
    pool.probes = {vbase};
    pool.density = spacing;
    pool.cap = cap;
    pool.family = PoolFamily::Fig2Band;
    pool.fig2 = model;
    double band_h = model.band_y1 - model.band_y0;
    for (double r = 0.5; r + 0.5 <= band_h + 1e-9; r += spacing) {
        if (pool.entries.size() >= cap) throw Error(ErrorCode::BadInput, "pool cap exceeded");
        pool.entries.push_back({0, r});
    }
    return pool;
}

// flat binary layout (little-endian):
//   8 bytes magic "CRTNPOOL", u32 version = 1,
//   u64 space descriptor hash, f64 density, u64 count,
//   count records of { i32 probe_id, f64 pole_center }
void save_pool(const CurtainPool& pool, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::BadInput, "cannot open pool file for write: " + path);
    auto put = [&](const void* p, std::size_t n) { f.write(static_cast<const char*>(p), n); };
    put("CRTNPOOL", 8);
    std::uint32_t version = 1;
    put(&version, 4);
    std::uint64_t sh = pool.space->descriptor_hash();
    put(&sh, 8);
    put(&pool.density, 8);
    std::uint64_t count = pool.entries.size();
    put(&count, 8);
    for (const auto& e : pool.entries) {
        put(&e.probe, 4);
        put(&e.r, 8);
    }
}

CurtainPool load_pool(const Space& space,
                      std::vector<std::shared_ptr<const Geodesic>> probes,
                      const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::BadInput, "cannot open pool file: " + path);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, "CRTNPOOL", 8) != 0)
        throw Error(ErrorCode::BadInput, "bad pool file magic");
    std::uint32_t version = 0;
    f.read(reinterpret_cast<char*>(&version), 4);
    if (version != 1) throw Error(ErrorCode::BadInput, "unsupported pool file version");
    std::uint64_t sh = 0;
    f.read(reinterpret_cast<char*>(&sh), 8);
    if (sh != space.descriptor_hash())
        throw Error(ErrorCode::BadInput, "pool file belongs to a different space descriptor");
    CurtainPool pool;
    pool.space = &space;
    pool.probes = std::move(probes);
    f.read(reinterpret_cast<char*>(&pool.density), 8);
    std::uint64_t count = 0;
    f.read(reinterpret_cast<char*>(&count), 8);
    for (std::uint64_t i = 0; i < count; ++i) {
        PoolEntry e;
        f.read(reinterpret_cast<char*>(&e.probe), 4);
        f.read(reinterpret_cast<char*>(&e.r), 8);
        if (!f) throw Error(ErrorCode::BadInput, "truncated pool file");
        if (e.probe < 0 || e.probe >= (std::int32_t)pool.probes.size())
            throw Error(ErrorCode::BadInput, "pool record references missing probe");
        pool.entries.push_back(e);
    }
    return pool;
}

// ---------------------------------------------------------------------------

SeparationContext::SeparationContext(const CurtainPool& pool, SampleBudget budget)
    : pool_(&pool), budget_(budget) {}

namespace {

// crossing test against a pool entry with the per-family fast paths
bool entry_crosses_curtain(const CurtainPool& pool, std::size_t entry, const Curtain& h,
                           const SampleBudget& budget) {
    if (pool.family == PoolFamily::Fig2Band && std::holds_alternative<Vec2>(h.base->a.c) &&
        std::abs(h.base->a.v2().y - h.base->b.v2().y) < 1e-9) {
        // Band slabs span the full width, so their feet on a horizontal base
        // attain the whole parameter range; they cross h exactly when the
        // pole clears both base endpoints.
        return h.pole_lo() > 1e-9 && h.pole_hi() < h.base->length - 1e-9;
    }
    return crosses(pool.curtain(entry), h, budget).yes;
}

} // namespace

const std::vector<char>& SeparationContext::crossing_set(std::size_t i) {
    auto it = crossing_sets_.find(i);
    if (it != crossing_sets_.end()) return it->second;
    std::vector<char> set(pool_->size(), 0);
    Curtain hi = pool_->curtain(i);
    for (std::size_t e = 0; e < pool_->size(); ++e) {
        if (e == i) continue;
        set[e] = entry_crosses_curtain(*pool_, e, hi, budget_);
    }
    return crossing_sets_.emplace(i, std::move(set)).first->second;
}

int SeparationContext::witness_count_entries(std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    std::uint64_t key = ((std::uint64_t)i << 32) | (std::uint64_t)j;
    auto it = witness_cache_.find(key);
    if (it != witness_cache_.end()) return it->second;
    int n;
    if (pool_->family == PoolFamily::StripAxis) {
        const PoolEntry& a = pool_->entries[i];
        const PoolEntry& b = pool_->entries[j];
        double lo = std::min(a.r, b.r) - 0.5, hi = std::max(a.r, b.r) + 0.5;
        n = pool_->strip->witness_count(lo, hi);
    } else {
        const std::vector<char>& si = crossing_set(i);
        const std::vector<char>& sj = crossing_set(j);
        std::vector<std::vector<double>> per_probe(pool_->probes.size());
        for (std::size_t e = 0; e < pool_->size(); ++e)
            if (si[e] && sj[e]) per_probe[pool_->entries[e].probe].push_back(pool_->entries[e].r);
        n = 0;
        for (auto& rs : per_probe) n = std::max(n, packed_count(rs));
    }
    witness_cache_[key] = n;
    return n;
}

// ---------------------------------------------------------------------------
// witness search

namespace {

struct SeparationImpl {
    // materialize a strip-family witness chain: m horizontal slabs on a
    // column vertical inside the span
    static Chain strip_witness_chain(const CurtainPool& pool, double span_lo, double span_hi,
                                     int m) {
        Chain chain;
        chain.cert = ChainCert::CommonBase;
        if (m <= 0) return chain;
        const StripModel& model = *pool.strip;
        const auto* strip = static_cast<const StripSpace*>(pool.space);
        // pick a column abscissa inside the span
        double x_w = 0.5 * (span_lo + span_hi);
        for (const auto& L : model.lows) {
            if (x_w >= L.x_lo && x_w <= L.x_hi) {
                x_w = (L.x_hi + 0.25 <= span_hi) ? L.x_hi + 0.25 : L.x_lo - 0.25;
                break;
            }
        }
        x_w = std::clamp(x_w, 0.25, model.x_max - 0.25);
        auto vbase = std::make_shared<Geodesic>(
            strip->geodesic(strip->make(x_w, 0), strip->make(x_w, model.H)));
        double limit = model.span_height_limit(span_lo, span_hi);
        double gap = (m >= 2) ? limit / (m - 1) : 0.0;
        for (int k = 0; k < m; ++k)
            chain.curtains.emplace_back(vbase, 0.5 + k * gap, 1e-6, true);
        chain.note = "strip family witnesses (analytic count)";
        return chain;
    }
};

} // namespace

WitnessResult separation_witness(SeparationContext& ctx, const Curtain& h, const Curtain& k) {
    const CurtainPool& pool = ctx.pool();
    if (pool.entries.empty()) throw Error(ErrorCode::EmptyPool, "separation_witness on empty pool");

    if (pool.family == PoolFamily::StripAxis && same_geodesic(*h.base, *pool.probes[0]) &&
        same_geodesic(*k.base, *pool.probes[0])) {
        double lo = std::min(h.pole_lo(), k.pole_lo());
        double hi = std::max(h.pole_hi(), k.pole_hi());
        int m = pool.strip->witness_count(lo, hi);
        WitnessResult out;
        out.n = m;
        out.chain = SeparationImpl::strip_witness_chain(pool, lo, hi, m);
        return out;
    }

    // generic: filter pool curtains crossing both, then chain them per probe
    std::vector<std::vector<double>> per_probe(pool.probes.size());
    std::vector<std::vector<std::pair<double, std::size_t>>> per_probe_ids(pool.probes.size());
    for (std::size_t e = 0; e < pool.entries.size(); ++e) {
        if (!entry_crosses_curtain(pool, e, h, ctx.budget())) continue;
        if (!entry_crosses_curtain(pool, e, k, ctx.budget())) continue;
        per_probe[pool.entries[e].probe].push_back(pool.entries[e].r);
        per_probe_ids[pool.entries[e].probe].push_back({pool.entries[e].r, e});
    }
    int best = 0;
    std::size_t best_probe = 0;
    for (std::size_t p = 0; p < per_probe.size(); ++p) {
        int c = packed_count(per_probe[p]);
        if (c > best) {
            best = c;
            best_probe = p;
        }
    }
    WitnessResult out;
    out.n = best;
    out.chain.cert = ChainCert::CommonBase;
    if (best > 0) {
        auto& ids = per_probe_ids[best_probe];
        std::sort(ids.begin(), ids.end());
        double last = -1e300;
        for (auto& [r, e] : ids) {
            if (r - last > 1.0) {
                out.chain.curtains.push_back(pool.curtain(e));
                last = r;
            }
        }
        out.chain.note = "pool witnesses on one probe";
    }
    return out;
}

// ---------------------------------------------------------------------------
// candidate preparation + the longest-chain DP

namespace {

struct CandSet {
    // per probe: pool entry ids of curtains separating x from y, sorted by r
    std::vector<std::vector<std::size_t>> by_probe;
    double d = 0;
    bool degenerate = false; // x == y
};

CandSet prepare_candidates(SeparationContext& ctx, const Point& x, const Point& y) {
    const CurtainPool& pool = ctx.pool();
    CandSet cs;
    cs.d = pool.space->dist(x, y);
    if (cs.d < 1e-12) {
        cs.degenerate = true;
        return cs;
    }
    cs.by_probe.resize(pool.probes.size());
    // one projection per probe and endpoint; all entries on a probe share it
    std::vector<double> foot_x(pool.probes.size()), foot_y(pool.probes.size());
    for (std::size_t p = 0; p < pool.probes.size(); ++p) {
        foot_x[p] = project(x, *pool.probes[p]).t;
        foot_y[p] = project(y, *pool.probes[p]).t;
    }
    const double tol = 1e-6;
    std::vector<std::vector<std::pair<double, std::size_t>>> tmp(pool.probes.size());
    for (std::size_t e = 0; e < pool.entries.size(); ++e) {
        const PoolEntry& en = pool.entries[e];
        double lo = en.r - 0.5 - tol, hi = en.r + 0.5 + tol;
        auto classify = [&](double f) { return f < lo ? -1 : (f > hi ? +1 : 0); };
        int sx = classify(foot_x[en.probe]);
        int sy = classify(foot_y[en.probe]);
        if (sx == 0 || sy == 0 || sx == sy) continue;
        tmp[en.probe].push_back({en.r, e});
    }
    for (std::size_t p = 0; p < tmp.size(); ++p) {
        std::sort(tmp[p].begin(), tmp[p].end());
        for (auto& [r, e] : tmp[p]) cs.by_probe[p].push_back(e);
    }
    return cs;
}

struct DpOut {
    int len = 0;
    std::vector<std::size_t> picks;
};

DpOut dp_longest(SeparationContext& ctx, const CandSet& cs, int L) {
    const CurtainPool& pool = ctx.pool();
    DpOut best;
    for (const auto& ids : cs.by_probe) {
        if ((int)ids.size() <= best.len && !ids.empty() && (int)ids.size() <= best.len) {
            // cannot beat current best
        }
        if (ids.empty()) continue;
        std::size_t m = ids.size();
        std::vector<int> dp(m, 1);
        std::vector<int> prev(m, -1);
        int probe_best = 0, probe_best_j = 0;
        for (std::size_t j = 0; j < m; ++j) {
            double rj = pool.entries[ids[j]].r;
            for (std::size_t i = 0; i < j; ++i) {
                double ri = pool.entries[ids[i]].r;
                if (rj - ri <= 1.0) continue; // closed poles would intersect
                if (dp[i] + 1 <= dp[j]) continue;
                if (ctx.witness_count_entries(ids[i], ids[j]) > L) continue;
                dp[j] = dp[i] + 1;
                prev[j] = (int)i;
            }
            if (dp[j] > probe_best) {
                probe_best = dp[j];
                probe_best_j = (int)j;
            }
        }
        if (probe_best > best.len) {
            best.len = probe_best;
            best.picks.clear();
            for (int j = probe_best_j; j >= 0; j = prev[j]) best.picks.push_back(ids[j]);
            std::reverse(best.picks.begin(), best.picks.end());
        }
    }
    return best;
}

} // namespace

LongestChainResult longest_Lchain(SeparationContext& ctx, const Point& x, const Point& y, int L) {
    if (L < 1) throw Error(ErrorCode::BadInput, "L must be >= 1");
    const CurtainPool& pool = ctx.pool();
    LongestChainResult out;
    out.est.pool_id = pool.id();
    CandSet cs = prepare_candidates(ctx, x, y);
    if (cs.degenerate) {
        out.est.value = 0;
        out.est.bound = BoundKind::Exact;
        out.note = "d_L(x,x) = 0";
        return out;
    }
    DpOut dp = dp_longest(ctx, cs, L);
    out.est.value = 1.0 + dp.len;
    out.est.bound = BoundKind::Lower;
    out.chain.cert = ChainCert::CommonBase;
    for (std::size_t e : dp.picks) out.chain.curtains.push_back(pool.curtain(e));
    std::ostringstream os;
    os << "pool-relative lower bound (pool " << pool.id() << ", " << pool.size()
       << " curtains); enlarging the pool can only raise it";
    out.note = os.str();
    if (out.est.value >= 1.0 + cs.d + 1e-9) out.note += "; WARNING: d_L cap exceeded";
    return out;
}

DhatResult dhat(SeparationContext& ctx, const Point& x, const Point& y, int L_max) {
    if (L_max < 1) throw Error(ErrorCode::BadInput, "L_max must be >= 1");
    const CurtainPool& pool = ctx.pool();
    DhatResult out;
    out.lower.pool_id = out.upper.pool_id = pool.id();
    out.lower.L_max = out.upper.L_max = L_max;
    CandSet cs = prepare_candidates(ctx, x, y);
    if (cs.degenerate) {
        out.lower.bound = out.upper.bound = BoundKind::Exact;
        return out;
    }
    double lower = 0, upper = 0;
    double cap = 1.0 + std::ceil(cs.d);
    for (int L = 1; L <= L_max; ++L) {
        DpOut dp = dp_longest(ctx, cs, L);
        out.chain_size.push_back(dp.len);
        double L3 = (double)L * L * L;
        lower += dp.len / L3;
        upper += cap / L3;
    }
    double tail = (1.0 + cs.d) * 0.5 / ((double)L_max * L_max);
    out.lower.value = lower;
    out.lower.bound = BoundKind::Lower;
    out.upper.value = upper + tail;
    out.upper.bound = BoundKind::Upper;
    out.upper.tail = tail;
    return out;
}

GromovInterval gromov_product(SeparationContext& ctx, const Point& x, const Point& y,
                              const Point& o, int L_max) {
    const Space* sp = ctx.pool().space;
    double dxo = sp->dist(x, o), dyo = sp->dist(y, o), dxy = sp->dist(x, y);
    if (dxo < 1e-12 || dyo < 1e-12) return {0, 0}; // formula collapses exactly
    if (dxy < 1e-12) {
        DhatResult d = dhat(ctx, o, x, L_max);
        return {d.lower.value, d.upper.value};
    }
    DhatResult dox = dhat(ctx, o, x, L_max);
    DhatResult doy = dhat(ctx, o, y, L_max);
    DhatResult dxy_est = dhat(ctx, x, y, L_max);
    GromovInterval g;
    g.lo = 0.5 * (dox.lower.value + doy.lower.value - dxy_est.upper.value);
    g.hi = 0.5 * (dox.upper.value + doy.upper.value - dxy_est.lower.value);
    g.hi = std::max(g.hi, 0.0);
    g.lo = std::clamp(g.lo, 0.0, g.hi);
    return g;
}

// ---------------------------------------------------------------------------
// gluing / backtracking / dualizing

int backtrack_bound(int L) {
    if (L < 0) throw Error(ErrorCode::BadInput, "L must be >= 0");
    return 1 + L / 2;
}

namespace {

// evidence that some point of `h` lies strictly on `want` side of `cut`
bool meets_halfspace(const Curtain& h, const Curtain& cut, Side want, const SampleBudget& budget) {
    if (same_base(h, cut)) {
        // feet of h's points are exactly its pole interval
        return want == Side::Minus ? h.pole_lo() < cut.pole_lo() : h.pole_hi() > cut.pole_hi();
    }
    for (const Point& p : sample_on_curtain(h, budget))
        if (side(cut, p) == want) return true;
    return false;
}

} // namespace

Chain glue_chains(SeparationContext& ctx, const Chain& c, const Chain& cp, int L) {
    if (L < 0) throw Error(ErrorCode::BadInput, "L must be >= 0");
    const std::size_t n = c.size(), m = cp.size();
    if (n <= 1) throw Error(ErrorCode::BadInput, "glue_chains needs |c| > 1");
    if (m <= (std::size_t)L + 1) throw Error(ErrorCode::BadInput, "glue_chains needs |c'| > L+1");

    const SampleBudget& budget = ctx.budget();
    const Curtain& h1p = cp.curtains.front();
    // the halfspace of h'_1 not containing h'_2
    Side toward_h2 = side(h1p, cp.curtains[1].pole_center_point());
    if (toward_h2 == Side::On)
        throw Error(ErrorCode::HypothesisUnverified, "h'_2 center lies on h'_1");
    Side minus_side = (toward_h2 == Side::Minus) ? Side::Plus : Side::Minus;
    for (std::size_t j = 0; j < n; ++j)
        if (!meets_halfspace(c.curtains[j], h1p, minus_side, budget))
            throw Error(ErrorCode::HypothesisUnverified,
                        "no evidence that h'_1^- meets every h_j");
    const Curtain& hn = c.curtains.back();
    Side toward_prev = side(hn, c.curtains[n - 2].pole_center_point());
    if (toward_prev == Side::On)
        throw Error(ErrorCode::HypothesisUnverified, "h_{n-1} center lies on h_n");
    Side plus_side = (toward_prev == Side::Minus) ? Side::Plus : Side::Minus;
    for (std::size_t i = 0; i < m; ++i)
        if (!meets_halfspace(cp.curtains[i], hn, plus_side, budget))
            throw Error(ErrorCode::HypothesisUnverified,
                        "no evidence that h_n^+ meets every h'_i");

    Chain out;
    for (std::size_t j = 0; j + 1 < n; ++j) out.curtains.push_back(c.curtains[j]);
    for (std::size_t i = (std::size_t)L + 1; i < m; ++i) out.curtains.push_back(cp.curtains[i]);
    ChainCheck check = is_chain(out.curtains, budget);
    if (!check.valid)
        throw Error(ErrorCode::HypothesisUnverified, "glued family fails chain validation: " + check.reason);
    out.cert = check.cert;
    std::ostringstream os;
    os << "glued " << n << "+" << m << " L=" << L << " -> " << out.size();
    out.note = os.str();
    if (out.size() != n + m - (std::size_t)L - 2)
        throw Error(ErrorCode::BadInput, "gluing cardinality mismatch");
    return out;
}

Chain dualize_chain(SeparationContext& ctx, const Chain& c, const Point& x, const Point& y,
                    int L, int n) {
    if (n < 1) throw Error(ErrorCode::BadInput, "dualize_chain needs n >= 1");
    if (L < 0) throw Error(ErrorCode::BadInput, "L must be >= 0");
    const std::size_t need = (std::size_t)(4 * L + 10) * (std::size_t)n;
    if (c.size() < need) {
        std::ostringstream os;
        os << "dualize_chain needs |c| >= (4L+10)n = " << need << ", got " << c.size();
        throw Error(ErrorCode::InsufficientLength, os.str());
    }
    for (const Curtain& h : c.curtains) {
        Side sx = side(h, x), sy = side(h, y);
        if (sx == Side::On || sy == Side::On || sx == sy)
            throw Error(ErrorCode::BadInput, "every curtain of c must separate x from y");
    }
    auto gamma = std::make_shared<Geodesic>(make_geodesic(x, y));
    std::vector<double> params;
    params.reserve(c.size());
    for (const Curtain& h : c.curtains) params.push_back(crossing_parameter(h, *gamma));
    std::sort(params.begin(), params.end());

    Chain out;
    out.cert = ChainCert::CommonBase;
    std::size_t last = c.size() - 1;
    for (int k = 0; k <= n; ++k) {
        std::size_t idx = (std::size_t)std::llround((double)k * last / n);
        double r = params[idx];
        r = std::clamp(r, 0.51, gamma->length - 0.51);
        if (!out.curtains.empty() && r - out.curtains.back().r <= 1.0)
            throw Error(ErrorCode::BadInput, "dualize_chain: crossing parameters too bunched");
        out.curtains.emplace_back(gamma, r);
    }

    // pool evidence: consecutive duals must remain L-separation-unrefuted
    std::ostringstream os;
    os << "duals at group midpoints;";
    bool unrefuted = true;
    for (std::size_t i = 0; i + 1 < out.curtains.size(); ++i) {
        WitnessResult w = separation_witness(ctx, out.curtains[i], out.curtains[i + 1]);
        os << " w" << i << "=" << w.n;
        if (w.n > L) unrefuted = false;
    }
    os << (unrefuted ? "; L-separation unrefuted" : "; WARNING: pool refutes L-separation");
    // each dual separates the first from the last element of c
    bool sep_ok = true;
    for (const Curtain& du : out.curtains) {
        bool front_ok = meets_halfspace(c.curtains.front(), du, Side::Minus, ctx.budget()) &&
                        !meets_halfspace(c.curtains.front(), du, Side::Plus, ctx.budget());
        bool back_ok = meets_halfspace(c.curtains.back(), du, Side::Plus, ctx.budget()) &&
                       !meets_halfspace(c.curtains.back(), du, Side::Minus, ctx.budget());
        if (!(front_ok && back_ok)) sep_ok = false;
    }
    os << (sep_ok ? "; separates ends of c" : "; end-separation evidence incomplete");
    out.note = os.str();
    return out;
}

} // namespace curtainlab
