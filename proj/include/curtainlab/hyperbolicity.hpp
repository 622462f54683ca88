#pragma once

#include <string>
#include <vector>

#include "curtainlab/separation.hpp"

namespace curtainlab {

enum class MetricKind { Ambient, DL, Dhat };

std::string metric_kind_name(MetricKind k);

struct DeltaReport {
    MetricKind kind = MetricKind::Ambient;
    int L = 0; // for MetricKind::DL
    double window = 0;
    double delta_est = 0; // max four-point defect over sampled quadruples
    int quadruples = 0;
    std::uint64_t pool_id = 0;
    std::uint64_t seed = 0;
};

// Four-point condition: for each sampled quadruple, half the gap between the
// largest and middle of the three pair sums. d_L / d-hat use pool lower
// estimates consistently (one fixed pool per report).
DeltaReport delta_scan(const Space& space, MetricKind kind, const Window& window,
                       int n_quadruples, std::uint64_t seed, SeparationContext* ctx = nullptr,
                       int L = 1, int L_max = 16);

struct Grid {
    Chain H, K;
    int thinness = 0; // min(|H|, |K|)
};

// Builds common-base chains along each probe of the two families, keeps the
// all-pairs-crossing core per probe pair, returns grids sorted by thinness.
// Thinness values are lower bounds on the best grid in the space.
std::vector<Grid> grid_search(const Space& space,
                              const std::vector<std::shared_ptr<const Geodesic>>& h_probes,
                              const std::vector<std::shared_ptr<const Geodesic>>& k_probes,
                              const SampleBudget& budget);

struct QiReport {
    double d = 0;
    double d_E_lower = 0;
    bool lower_ok = false;  // d_E_lower <= d (holds since d_L < 1 + d)
    double upper_rhs = 0;   // d_E_lower (E+2) + (E+2)
    bool upper_ok = false;  // d <= upper_rhs; d_E is under-estimated, so this
                            // side is reported, not asserted
};

QiReport qi_sanity(SeparationContext& ctx, const Point& x, const Point& y, int E);

} // namespace curtainlab
