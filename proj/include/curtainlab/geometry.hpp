#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "curtainlab/rng.hpp"

namespace curtainlab {

// ---------------------------------------------------------------------------
// Errors

enum class ErrorCode {
    MixedSpaces,
    OutsideDomain,
    TooShort,
    EmptyPool,
    HypothesisUnverified,
    InsufficientLength,
    RayTooShort,
    TruncationTooLow,
    NoRoot,
    BadInput,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Points

struct Vec2 {
    double x = 0, y = 0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct TreePos {
    int edge = 0;
    double off = 0; // distance from edge endpoint u
};

class Space;
struct Point;

struct ProductPos {
    std::vector<Point> parts;
};

struct Point {
    const Space* space = nullptr;
    std::variant<Vec2, TreePos, std::shared_ptr<ProductPos>> c;

    Vec2 v2() const { return std::get<Vec2>(c); }
    const TreePos& tp() const { return std::get<TreePos>(c); }
    const ProductPos& pp() const { return *std::get<std::shared_ptr<ProductPos>>(c); }
};

// ---------------------------------------------------------------------------
// Geodesics (always finite segments; rays are long segments by convention)

struct TreePath {
    // legs walked in order; each leg is (edge, from_off, to_off)
    struct Leg {
        int edge;
        double from, to;
    };
    std::vector<Leg> legs;
};

struct H2Arc {
    bool vertical = false;
    double x = 0;      // vertical case: the line x = const
    double mu_minus = 0, mu_plus = 0; // semicircle endpoints on the real axis
    double s0 = 0;     // log-parameter of the start point in the normal frame
    int dir = 1;       // +1 / -1 along increasing log-parameter
};

struct Polyline {
    std::vector<Vec2> pts;
    std::vector<double> cum; // cumulative arclength, cum[0] = 0
};

struct ProductPath {
    std::vector<std::shared_ptr<const struct Geodesic>> factors;
};

struct Geodesic {
    const Space* space = nullptr;
    Point a, b;
    double length = 0;
    std::variant<std::monostate, TreePath, H2Arc, Polyline, ProductPath> payload;

    Point eval(double t) const;
};

struct ProjResult {
    double t = 0;
    double dist = 0;
    bool zero_length = false; // flagged convention for degenerate bases
};

// ---------------------------------------------------------------------------
// Sampling windows: interpretation is per space kind (see sample_point)

struct Window {
    double radius = 10;  // plane box half-width / h2 axis range / polygon bbox
    double lateral = 4;  // h2 lateral spread
};

// ---------------------------------------------------------------------------
// Spaces

enum class SpaceKind {
    EuclideanPlane,
    HyperbolicPlane,
    MetricTree,
    Product,
    PolygonDomain,
    StripSpace,
};

class Space {
public:
    virtual ~Space() = default;
    virtual SpaceKind kind() const = 0;
    virtual std::string describe() const = 0;
    virtual Point basepoint() const = 0;
    virtual void validate(const Point& p) const = 0;
    virtual double dist(const Point& p, const Point& q) const = 0;
    virtual Geodesic geodesic(const Point& p, const Point& q) const = 0;
    virtual Point geo_eval(const Geodesic& g, double t) const = 0;
    virtual Point sample_point(const Window& w, Rng& rng) const = 0;

    // Closed-form projection when the kind has one; nullopt falls back to the
    // golden-section solver.
    virtual std::optional<ProjResult> project_closed_form(const Point&, const Geodesic&) const {
        return std::nullopt;
    }

    std::uint64_t descriptor_hash() const;

protected:
    void check_same_space(const Point& p, const Point& q) const;
};

// generic: golden-section on the convex map t -> d(p, g(t)); uses the closed
// form when the space provides one, keeping the solver as cross-check path
ProjResult project(const Point& p, const Geodesic& g, double tol = 1e-9);
ProjResult project_solver(const Point& p, const Geodesic& g, double tol = 1e-9);

// ---------------------------------------------------------------------------

class EuclideanPlane final : public Space {
public:
    SpaceKind kind() const override { return SpaceKind::EuclideanPlane; }
    std::string describe() const override { return "plane"; }
    Point basepoint() const override { return make(0, 0); }
    void validate(const Point& p) const override;
    double dist(const Point& p, const Point& q) const override;
    Geodesic geodesic(const Point& p, const Point& q) const override;
    Point geo_eval(const Geodesic& g, double t) const override;
    Point sample_point(const Window& w, Rng& rng) const override;
    std::optional<ProjResult> project_closed_form(const Point& p, const Geodesic& g) const override;

    Point make(double x, double y) const { return Point{this, Vec2{x, y}}; }
};

class HyperbolicPlane final : public Space {
public:
    SpaceKind kind() const override { return SpaceKind::HyperbolicPlane; }
    std::string describe() const override { return "h2"; }
    Point basepoint() const override { return make(0, 1); }
    void validate(const Point& p) const override;
    double dist(const Point& p, const Point& q) const override;
    Geodesic geodesic(const Point& p, const Point& q) const override;
    Point geo_eval(const Geodesic& g, double t) const override;
    Point sample_point(const Window& w, Rng& rng) const override;
    std::optional<ProjResult> project_closed_form(const Point& p, const Geodesic& g) const override;

    Point make(double x, double y) const;

    // unit-speed ray up the y-axis from (0,1); the standard probe axis
    Geodesic axis_ray(double length) const;
    // geodesic through the axis point at parameter u, orthogonal to the axis,
    // of the given length centered on the axis
    Geodesic perpendicular_at(double u, double length) const;
};

class MetricTree final : public Space {
public:
    MetricTree(int n_vertices, std::vector<std::array<int, 2>> edges, std::vector<double> lengths);

    SpaceKind kind() const override { return SpaceKind::MetricTree; }
    std::string describe() const override;
    Point basepoint() const override { return vertex_point(0); }
    void validate(const Point& p) const override;
    double dist(const Point& p, const Point& q) const override;
    Geodesic geodesic(const Point& p, const Point& q) const override;
    Point geo_eval(const Geodesic& g, double t) const override;
    Point sample_point(const Window& w, Rng& rng) const override;
    std::optional<ProjResult> project_closed_form(const Point& p, const Geodesic& g) const override;

    Point vertex_point(int v) const;
    Point edge_point(int e, double off) const { return Point{this, TreePos{e, off}}; }
    int n_vertices() const { return n_; }
    int n_edges() const { return (int)edges_.size(); }
    double edge_length(int e) const { return len_[e]; }
    double vertex_dist(int u, int v) const { return vd_[u][v]; }
    const std::array<int, 2>& edge(int e) const { return edges_[e]; }

private:
    int n_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<double> len_;
    std::vector<std::vector<std::pair<int, int>>> adj_; // (neighbor, edge)
    std::vector<std::vector<double>> vd_;
    std::vector<std::vector<int>> next_; // next vertex on path u -> v

    friend struct TreeOps;
};

// tripod with three legs from a center; the workhorse test tree
std::shared_ptr<MetricTree> make_tripod(double leg_a, double leg_b, double leg_c);

class ProductSpace final : public Space {
public:
    explicit ProductSpace(std::vector<std::shared_ptr<const Space>> factors);

    SpaceKind kind() const override { return SpaceKind::Product; }
    std::string describe() const override;
    Point basepoint() const override;
    void validate(const Point& p) const override;
    double dist(const Point& p, const Point& q) const override;
    Geodesic geodesic(const Point& p, const Point& q) const override;
    Point geo_eval(const Geodesic& g, double t) const override;
    Point sample_point(const Window& w, Rng& rng) const override;

    Point make(std::vector<Point> parts) const;
    std::size_t n_factors() const { return factors_.size(); }
    const Space& factor(std::size_t i) const { return *factors_[i]; }

private:
    std::vector<std::shared_ptr<const Space>> factors_;
};

// ---------------------------------------------------------------------------
// Simply connected polygonal domain with the intrinsic (taut-path) metric.

class PolygonMesh; // triangulation + funnel engine (polygon_mesh.hpp)

class PolygonDomain : public Space {
public:
    explicit PolygonDomain(std::vector<Vec2> boundary_ccw, std::string tag = "polygon");
    ~PolygonDomain() override;

    SpaceKind kind() const override { return SpaceKind::PolygonDomain; }
    std::string describe() const override;
    Point basepoint() const override { return make(base_.x, base_.y); }
    void validate(const Point& p) const override;
    double dist(const Point& p, const Point& q) const override;
    Geodesic geodesic(const Point& p, const Point& q) const override;
    Point geo_eval(const Geodesic& g, double t) const override;
    Point sample_point(const Window& w, Rng& rng) const override;

    Point make(double x, double y) const { return Point{this, Vec2{x, y}}; }
    bool contains(Vec2 v, double tol = 1e-9) const;
    const std::vector<Vec2>& boundary() const { return boundary_; }
    // exact taut polyline between interior points (the funnel construction)
    Polyline shortest_path(Vec2 a, Vec2 b) const;

    void set_basepoint(Vec2 v) { base_ = v; }

protected:
    std::vector<Vec2> boundary_;
    std::string tag_;
    Vec2 base_{0, 0};
    std::unique_ptr<PolygonMesh> mesh_;
};

// ---------------------------------------------------------------------------
// The strip construction: region between the x-axis and a monotone height
// curve, with full-height columns between width-1 gaps at given positions;
// truncated at height H. Geodesic queries run on the polygonization; the
// model keeps the analytic structure the axis-aligned curtain family needs.

struct StripModel {
    struct LowInterval {
        double x_lo, x_hi; // top boundary is curve(x) here; columns elsewhere
        std::vector<Vec2> ceiling; // boundary samples, increasing x
    };
    double H = 64;
    double x_max = 0;
    std::vector<LowInterval> lows;      // sorted, disjoint; first starts at 0
    std::vector<double> valley_centers; // width-1 gaps at these x positions
    std::function<double(double)> curve;

    // polygonized ceiling height at x (H inside columns)
    double ceiling_at(double x) const;
    // exact: the straight segment stays inside the polygonized region
    bool segment_inside(Vec2 p, Vec2 q) const;

    // Tallest horizontal slab component spanning strictly past [x_lo, x_hi]:
    // the pole-center ceiling is this value + 1/2 (H-limited inside columns).
    double span_height_limit(double x_lo, double x_hi) const;
    // Largest chain of unit-pole horizontal curtains crossing a slab pair
    // whose joint span is [x_lo, x_hi]: strictly-disjoint pole packing.
    int witness_count(double x_lo, double x_hi) const;
};

class StripSpace : public PolygonDomain {
public:
    // Example 5.1 geometry: valleys at i^2, curve sqrt(x), truncation H.
    // i runs 1..i_max; x_max = (i_max+1)^2 - 1/2.
    static std::shared_ptr<StripSpace> example51(int i_max, double H);

    // generalized construction: valley positions with an increasing curve
    static std::shared_ptr<StripSpace> with_valleys(std::vector<double> centers,
                                                    const std::function<double(double)>& curve,
                                                    double H, double x_max,
                                                    int samples_per_valley = 9);

    SpaceKind kind() const override { return SpaceKind::StripSpace; }
    const StripModel& model() const { return model_; }

    // straight segments inside the region short-circuit the funnel; the
    // x-axis projects by dropping the x coordinate
    double dist(const Point& p, const Point& q) const override;
    Geodesic geodesic(const Point& p, const Point& q) const override;
    std::optional<ProjResult> project_closed_form(const Point& p,
                                                  const Geodesic& g) const override;

protected:
    StripSpace(std::vector<Vec2> boundary, StripModel model, std::string tag);

private:
    StripModel model_;
};

// Figure-2 style band space: two full-height blocks joined by a height-limited
// middle band, with two removed strips above/below the band.
struct Fig2Model {
    double band_y0 = 0, band_y1 = 4.75; // band height 4.75
    double bridge_x0 = 0, bridge_x1 = 0;
    double width = 0, height = 0;
};
std::shared_ptr<PolygonDomain> make_figure2_space(Fig2Model& out_model);

// ---------------------------------------------------------------------------

Geodesic make_geodesic(const Point& p, const Point& q);

} // namespace curtainlab
