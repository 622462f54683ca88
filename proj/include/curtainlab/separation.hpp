#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "curtainlab/curtains.hpp"
#include "curtainlab/geometry.hpp"

namespace curtainlab {

// ---------------------------------------------------------------------------
// Curtain pools: the finite search universe every separation claim is
// relative to. Def. L-separated quantifies over all chains; that is
// undecidable, so every result records its pool id.

struct PoolEntry {
    std::int32_t probe = 0;
    double r = 0;
};

enum class PoolFamily {
    Sampled,   // generic: crossing/witness evidence from the sampler
    StripAxis, // axis-aligned family in a strip space; witnesses analytic
    Fig2Band,  // horizontal band family of the figure-2 space
};

struct CurtainPool {
    const Space* space = nullptr;
    std::vector<std::shared_ptr<const Geodesic>> probes;
    std::vector<PoolEntry> entries;
    double density = 0.5;
    std::size_t cap = 20000;
    PoolFamily family = PoolFamily::Sampled;
    const StripModel* strip = nullptr; // StripAxis metadata
    std::optional<Fig2Model> fig2;     // Fig2Band metadata

    std::size_t size() const { return entries.size(); }
    Curtain curtain(std::size_t i) const;
    std::uint64_t id() const;
};

// curtains at `density` spacing along each probe, pole kept inside the probe
CurtainPool build_pool(const Space& space,
                       std::vector<std::shared_ptr<const Geodesic>> probes, double density,
                       std::size_t cap = 20000);

// verticals dual to the x-axis of a strip space; witness counting is closed
// form through the StripModel (no sampling)
CurtainPool build_strip_axis_pool(const StripSpace& space, double density, double t_hi,
                                  std::size_t cap = 20000);

// horizontal curtains of the figure-2 middle band at the given spacing, all
// dual to the canonical vertical base of the band
CurtainPool build_fig2_pool(const PolygonDomain& space, const Fig2Model& model, double spacing,
                            std::size_t cap = 20000);

// versioned flat binary file; round-trips must be bit-exact
void save_pool(const CurtainPool& pool, const std::string& path);
CurtainPool load_pool(const Space& space,
                      std::vector<std::shared_ptr<const Geodesic>> probes,
                      const std::string& path);

// ---------------------------------------------------------------------------

enum class BoundKind { Lower, Upper, Exact };

struct MetricEstimate {
    double value = 0;
    BoundKind bound = BoundKind::Lower;
    int L_max = 0;          // truncation index (d-hat only)
    std::uint64_t pool_id = 0;
    double tail = 0;        // analytic tail term added on Upper bounds
};

// ---------------------------------------------------------------------------
// Query context: owns the evidence caches shared across queries on one pool.

class SeparationContext {
public:
    SeparationContext(const CurtainPool& pool, SampleBudget budget = {});

    const CurtainPool& pool() const { return *pool_; }
    const SampleBudget& budget() const { return budget_; }

    // entries crossing pool entry i, built lazily once per i
    const std::vector<char>& crossing_set(std::size_t i);
    int witness_count_entries(std::size_t i, std::size_t j);

private:
    const CurtainPool* pool_;
    SampleBudget budget_;
    std::unordered_map<std::size_t, std::vector<char>> crossing_sets_;
    std::unordered_map<std::uint64_t, int> witness_cache_;

    friend struct SeparationOps;
};

struct WitnessResult {
    int n = 0; // lower bound on the largest chain crossing both curtains
    Chain chain;
};

// Longest pool chain whose every curtain crosses both h and k. `n` refutes
// L-separation for all L < n; it never proves separation.
WitnessResult separation_witness(SeparationContext& ctx, const Curtain& h, const Curtain& k);

struct LongestChainResult {
    MetricEstimate est;
    Chain chain;
    std::string note;
};

// Pool lower estimate of d_L(x, y) = 1 + max separating L-chain.
LongestChainResult longest_Lchain(SeparationContext& ctx, const Point& x, const Point& y, int L);

struct DhatResult {
    MetricEstimate lower, upper;
    std::vector<int> chain_size; // chain_size[L-1] = best separating L-chain
};

// Truncated curtain-model distance with explicit bound directions. The lower
// bound sums the chain cardinalities (the paper's display form); the upper
// bound caps each d_L at 1 + ceil(d) and adds the analytic tail
// (1 + d) * sum_{L > M} 1/L^3 <= (1 + d)/(2 M^2).
DhatResult dhat(SeparationContext& ctx, const Point& x, const Point& y, int L_max);

struct GromovInterval {
    double lo = 0, hi = 0;
};

GromovInterval gromov_product(SeparationContext& ctx, const Point& x, const Point& y,
                              const Point& o, int L_max);

// Gluing of L-chains: {h_1..h_{n-1}, h'_{L+2}..h'_m}, cardinality n+m-L-2.
Chain glue_chains(SeparationContext& ctx, const Chain& c, const Chain& cp, int L);

// backtracking cap for chains separating an interior point: 1 + floor(L/2)
int backtrack_bound(int L);

// From a chain of (4L+10)n curtains separating x from y, place n+1 curtains
// dual to [x, y] at group midpoints; separation left unrefuted by the pool.
Chain dualize_chain(SeparationContext& ctx, const Chain& c, const Point& x, const Point& y,
                    int L, int n);

} // namespace curtainlab
