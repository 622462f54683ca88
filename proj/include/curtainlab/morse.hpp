#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curtainlab/separation.hpp"

namespace curtainlab {

// ---------------------------------------------------------------------------
// Sublinear functions kappa: [0,inf) -> [1,inf), monotone, concave,
// kappa(t)/t -> 0. Three closed-form families keep the chain-builder root
// bracket provably valid.

enum class KappaFamily { Const, Log, Power };

class SublinearFn {
public:
    static SublinearFn constant(double c);          // t -> c, c >= 1
    static SublinearFn log_pow(double p);           // t -> (1 + ln(1+t))^p, p in [1,2]
    static SublinearFn power(double a);             // t -> (1+t)^a, a in (0,1)
    static SublinearFn parse(const std::string& s); // "const:1", "log:1", "power:0.5"

    double operator()(double t) const;
    double deriv(double t) const;
    bool kappa4_sublinear() const;
    KappaFamily family() const { return family_; }
    double param() const { return param_; }
    std::string name() const;

    // t -> kappa(t)^k as a plain function (used by the shadow fits)
    std::function<double(double)> pow_fn(double k) const;

private:
    SublinearFn(KappaFamily f, double p);
    void check_invariants() const;
    KappaFamily family_;
    double param_;
};

// ---------------------------------------------------------------------------

struct ContractionSample {
    double dist_o;     // d(o, center)
    double dist_ray;   // d(center, ray)
    double radius;     // ball radius (theta * dist_ray)
    double proj_diam;  // sampled projected diameter
    double kappa_c;    // kappa(d(o, center))
};

struct ContractionReport {
    double D_est = 0; // certified lower bound: max proj_diam / kappa(center)
    std::vector<ContractionSample> samples;
};

struct MorseBudget {
    std::uint64_t seed = 0;
    int n_centers = 60;
    int n_ball = 96;       // interior samples per ball
    int n_boundary = 128;  // boundary directions (closed-form circles)
    int n_pairs = 120;     // slim-test pairs
};

// projected diameter of the metric ball B(center, radius) on the ray, by
// interior + boundary sampling; a lower bound of the true diameter
double projected_ball_diameter(const Geodesic& ray, const Point& center, double radius,
                               const MorseBudget& budget, std::uint64_t salt);

ContractionReport estimate_contraction(const Geodesic& ray, const SublinearFn& kappa,
                                       const MorseBudget& budget, const Window& window);

// ---------------------------------------------------------------------------

struct KappaChainElement {
    int i = 0;
    double t = 0;
    int witness_n = 0;    // separation_witness cardinality for (h_i, h_{i+1})
    double target = 0;    // 10 D kappa(t_{i+1}) + 3
};

struct KappaChain {
    std::shared_ptr<const Geodesic> ray;
    SublinearFn kappa;
    double C = 0; // excursion constant, 10 D by construction
    Chain chain;
    std::vector<KappaChainElement> elems;
    std::uint64_t pool_id = 0;

    // invariant checks
    bool spacing_ok(double tol = 1e-6) const;
    bool separation_ok() const; // no witness above C kappa(t_{i+1})
};

// Solves t_{i+1} - t_i = 10 D kappa(t_{i+1}) by bisection (the map is convex
// with one root right of t_i + 10 D kappa(t_i)), emits curtains dual to the
// ray at the t_i, and attaches pool separation evidence per consecutive pair.
KappaChain build_kappa_chain(SeparationContext& ctx, std::shared_ptr<const Geodesic> ray,
                             const SublinearFn& kappa, double D, int max_elems = 64);

void save_kappa_chain(const KappaChain& kc, const std::string& path);

// ---------------------------------------------------------------------------

struct SlimSample {
    double t_foot;  // parameter of pi_b(x)
    double dist;    // d(pi_b(x), [x, y])
    double ratio;   // dist / kappa(pi_b(x))
};

struct SlimReport {
    double C_est = 0;
    int violations = 0; // samples with ratio above the configured bound
    double bound = 0;
    std::vector<SlimSample> samples;
};

SlimReport kappa_slim_test(const Geodesic& ray, const SublinearFn& kappa,
                           const MorseBudget& budget, const Window& window, double bound = 0);

struct ExcursionReport {
    double slim_C_est = 0;
    double excursion_C = 0;
    double ratio = 0; // slim_C_est / excursion_C
    bool low_confidence = false;
    int violations = 0;
};

// Runs the slim test on the chain's ray; the paper's D' depends only on the
// excursion constant, so the report carries the fitted ratio, never a boolean.
ExcursionReport verify_excursion_implies_contracting(const KappaChain& kc,
                                                     const MorseBudget& budget,
                                                     const Window& window,
                                                     double multiple = 5.0);

// ---------------------------------------------------------------------------

struct ShadowSample {
    double s, t;
    double dl;       // dhat lower bound between b(s), b(t)
    double x;        // (t - s)/kappa(t) - 1
    double residual; // dl - C_fit * x
};

struct ShadowReport {
    double C_fit = 0;
    std::vector<ShadowSample> samples;
    int constrained = 0; // samples with x > 0
};

// Largest C with dhat_lower(b(s), b(t)) >= C (t-s)/kappa(t) - C over the
// sampled pairs. kappa is passed as a plain function so the kappa^4 / kappa^2
// direction checks reuse the fit.
ShadowReport persistent_shadow_test(SeparationContext& ctx, const Geodesic& ray,
                                    const std::function<double(double)>& kappa, int L_max,
                                    double min_gap, int n_samples);

} // namespace curtainlab
