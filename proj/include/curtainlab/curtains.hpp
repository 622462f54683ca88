#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curtainlab/geometry.hpp"

namespace curtainlab {

// A curtain is the preimage of a unit pole interval under closest-point
// projection to its base geodesic. Membership is always derived through
// side(); the point set is never materialized.
struct Curtain {
    std::shared_ptr<const Geodesic> base;
    double r = 0;       // pole center in base parameter
    double tol = 1e-6;  // classification tolerance

    Curtain() = default;
    Curtain(std::shared_ptr<const Geodesic> base_geodesic, double pole_center,
            double classification_tol = 1e-6, bool allow_boundary_pole = false);

    const Space* space() const { return base->space; }
    double pole_lo() const { return r - 0.5; }
    double pole_hi() const { return r + 0.5; }
    Point pole_center_point() const { return base->eval(r); }
};

enum class Side { Minus, On, Plus };

// classify by projecting onto the base; the tolerance band reports On
Side side(const Curtain& h, const Point& p, double proj_tol = 1e-9);

bool same_base(const Curtain& a, const Curtain& b);

struct SampleBudget {
    std::uint64_t seed = 0;
    int pole_steps = 7;   // fiber anchors across the pole
    int fiber_steps = 32; // steps along each fiber direction
    double reach = 8;     // fiber walk distance beyond pole separation
    int generic_tries = 400;
};

// points with side(k, .) == On, generated along the star-convex fiber
// directions [x, pi_P(x)] where the space allows, by rejection otherwise
std::vector<Point> sample_on_curtain(const Curtain& k, const SampleBudget& budget);

struct CrossResult {
    bool yes = false;
    bool exact = false; // decided in closed form rather than by search
    std::optional<std::pair<Point, Point>> witness; // (minus-side, plus-side)
};

// witness-or-NoEvidence: `yes == false` is a semidecision, not a proof
CrossResult crosses(const Curtain& h, const Curtain& k, const SampleBudget& budget);

struct DisjointEvidence {
    bool disjoint = false;
    bool exact = false;
};

DisjointEvidence disjoint_evidence(const Curtain& h, const Curtain& k,
                                   const SampleBudget& budget);

enum class ChainCert { CommonBase, General };

struct Chain {
    std::vector<Curtain> curtains;
    ChainCert cert = ChainCert::General;
    std::string note;

    std::size_t size() const { return curtains.size(); }
    bool empty() const { return curtains.empty(); }
};

struct ChainCheck {
    bool valid = false;
    ChainCert cert = ChainCert::General;
    std::string reason;
};

ChainCheck is_chain(const std::vector<Curtain>& curtains, const SampleBudget& budget);
inline ChainCheck is_chain(const Chain& c, const SampleBudget& budget) {
    return is_chain(c.curtains, budget);
}

// Dual chain with 1 + |c| = ceil(d) on the subsegment [x_param, y_param]:
// n = ceil(d) - 1 curtains, pole k covering [(k-1)(1+g)+g, (k-1)(1+g)+g+1]
// for the even gap g = (d - n)/(n+1).
Chain dual_chain(const std::shared_ptr<const Geodesic>& g, double x_param, double y_param);

// Bisection on side(h, gamma(t)); requires strictly opposite sides at the
// segment ends. Returns a parameter classified On within param_tol.
double crossing_parameter(const Curtain& h, const Geodesic& gamma, double param_tol = 1e-9);

} // namespace curtainlab
