#pragma once

#include <vector>

#include "curtainlab/geometry.hpp"

namespace curtainlab {

// Triangulation of a simple CCW polygon plus the machinery for exact taut
// (shortest) paths inside it: ear clipping, dual-tree walk, funnel.
class PolygonMesh {
public:
    explicit PolygonMesh(const std::vector<Vec2>& boundary_ccw);

    bool contains(Vec2 p, double tol = 1e-9) const;
    Polyline shortest_path(Vec2 a, Vec2 b) const;
    int locate(Vec2 p, double tol = 1e-9) const; // triangle index, -1 outside

    std::size_t triangle_count() const { return tris_.size(); }

private:
    struct Tri {
        int v[3];
        int nbr[3]; // neighbor across edge (v[i], v[i+1]); -1 on boundary
        double xmin, xmax;
    };

    const std::vector<Vec2>& vert(int) const = delete;
    std::vector<Vec2> pts_;
    std::vector<Tri> tris_;
    // x-bucket index for point location
    double bx0_ = 0, bx1_ = 0;
    int nbuckets_ = 0;
    std::vector<std::vector<int>> buckets_;

    void triangulate(const std::vector<Vec2>& poly);
    void build_adjacency();
    void build_index();
    bool point_in_tri(int t, Vec2 p, double tol) const;
    std::vector<int> tri_path(int from, int to) const;
};

} // namespace curtainlab
