#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curtainlab/morse.hpp"
#include "curtainlab/separation.hpp"

namespace curtainlab {

// ---------------------------------------------------------------------------
// Strip-table reproduction: counts of the largest axis-aligned L-chain dual
// to an initial axis segment, against the prediction min(2L, 2i).

struct Example51Row {
    int i = 0;
    int L = 0;
    double t = 0;       // query parameter (i+1)^2 - 1 on the axis
    int observed = 0;   // longest_Lchain value - 1
    int predicted = 0;  // min(2L, 2i)
};

struct Example51Result {
    std::vector<Example51Row> rows;
    std::vector<std::pair<int, double>> dhat_lower; // (i, lower bound at b(t))
    double dhat_cap = 0;                            // 2 zeta(2), the series value
    std::uint64_t pool_id = 0;
    bool within_one = true; // every |observed - predicted| <= 1
    bool dhat_bounded = true;
};

Example51Result example51(int i_max, int L_max_table, double H, int dhat_L_max = 64);

// ---------------------------------------------------------------------------
// Gromov-product trajectories along two probe rays; bounded products witness
// distinct boundary classes, the same-ray control must diverge.

struct InjectivityRow {
    double depth_i = 0, depth_j = 0;
    double lo = 0, hi = 0;          // gromov product interval
    double control_lo = 0;          // same-ray control (x_i . x_i)_o lower
};

struct InjectivityResult {
    std::vector<InjectivityRow> rows;
    bool bounded = false;            // cross-ray upper endpoints plateau
    bool control_diverging = false;  // same-ray lower endpoints grow
    std::uint64_t pool_id = 0;
};

InjectivityResult injectivity_probe(SeparationContext& ctx, const Geodesic& ray1,
                                    const Geodesic& ray2, const std::vector<double>& depths,
                                    int L_max);

// ---------------------------------------------------------------------------
// Discrete unboundedness check: d_m(o, b(t_i))/m^3 with m = ceil(C kappa(t_i))
// against the analytic (t_i - t_1)/(C kappa(t_i) + 1)^4 - 1.

struct UnboundednessRow {
    int i = 0;
    double t = 0;
    int m = 0;
    double left = 0;  // pool estimate d_m(o, b(t_i)) / m^3
    double right = 0; // analytic lower bound
};

struct UnboundednessResult {
    std::vector<UnboundednessRow> rows;
    int violations = 0;        // rows with left < right - slack
    bool left_growing = false; // strict growth over the tail
    bool right_growing = false;
};

UnboundednessResult unboundedness_probe(SeparationContext& ctx, const KappaChain& kc,
                                        double slack = 1e-9);

// ---------------------------------------------------------------------------

void write_example51_outputs(const Example51Result& r, const std::string& dir);
void write_injectivity_outputs(const InjectivityResult& r, const std::string& dir,
                               std::uint64_t seed);
void write_unboundedness_outputs(const UnboundednessResult& r, const std::string& dir,
                                 std::uint64_t seed);

} // namespace curtainlab
