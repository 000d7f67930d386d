#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dendro {

// Global point-equality tolerance in normalized edge coordinates.
inline constexpr double kPointTol = 1e-9;

struct Edge {
    int u = 0;
    int v = 0;
    double length = 0.0;
};

// A point of a dendrite: either a vertex, or an interior position t in (0,1)
// along an edge, measured from edge.u towards edge.v as a fraction of length.
struct DPoint {
    int vertex = -1;
    int edge = -1;
    double t = 0.0;

    static DPoint at_vertex(int v) { return DPoint{v, -1, 0.0}; }
    bool is_vertex() const { return vertex >= 0; }

    friend bool operator==(const DPoint&, const DPoint&) = default;
};

std::string to_string(const DPoint& p);

// One maximal piece of an arc lying on a single edge, traversed from
// edge coordinate t0 to t1. `start` is the arc-length offset of the piece.
struct ArcPiece {
    int edge = -1;
    double t0 = 0.0;
    double t1 = 0.0;
    double start = 0.0;
    double length = 0.0;
};

// The unique arc [from, to] as an ordered list of edge pieces.
struct ArcPath {
    DPoint from;
    DPoint to;
    std::vector<ArcPiece> pieces;
    double length = 0.0;
};

// Finite metric tree. Vertices are 0..n-1; edges are stored with u < v and
// sorted by (u, v), so edge ids are canonical for a given vertex/edge set.
class Dendrite {
public:
    Dendrite() : Dendrite(1, {}) {}
    Dendrite(int vertex_count, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const int> incident(int v) const;
    int degree(int v) const { return static_cast<int>(incident(v).size()); }
    int other_end(int e, int v) const { return edges_[e].u == v ? edges_[e].v : edges_[e].u; }

    // Canonical point on edge e at coordinate t in [0,1]; snaps to a vertex
    // when t is within kPointTol of 0 or 1.
    DPoint point(int e, double t) const;
    DPoint vertex(int v) const;
    // Point at arc-length `s` from edge.u along edge e.
    DPoint point_at_length(int e, double s) const;
    bool valid(const DPoint& p) const;
    void check(const DPoint& p) const;
    // Canonical form of an arbitrary (possibly non-normalized) point.
    DPoint canonical(const DPoint& p) const;

    double distance(const DPoint& x, const DPoint& y) const;
    double vertex_distance(int a, int b) const;
    bool same_point(const DPoint& x, const DPoint& y, double tol = kPointTol) const;
    int lca(int a, int b) const;

    ArcPath path(const DPoint& x, const DPoint& y) const;
    DPoint point_along(const ArcPath& path, double s) const;

    std::vector<int> endpoints() const;
    std::vector<int> branch_points() const;
    double total_length() const { return total_length_; }
    double diameter() const;

private:
    // Exit vertex candidates of p (p itself for a vertex, both ends otherwise)
    // with the distance from p to each.
    int exits(const DPoint& p, int (&v)[2], double (&d)[2]) const;
    void append_vertex_path(int a, int b, std::vector<ArcPiece>& out, double& offset) const;

    int n_ = 1;
    std::vector<Edge> edges_;
    std::vector<int> adj_offset_;
    std::vector<int> adj_;
    std::vector<int> parent_;
    std::vector<int> parent_edge_;
    std::vector<int> depth_;
    std::vector<double> root_dist_;
    std::vector<std::vector<int>> up_;
    double total_length_ = 0.0;
};

// Number of connected components of X minus p: the degree for a vertex and 2
// for an interior edge point.
int order(const Dendrite& X, const DPoint& p);

// Deterministic random tree on n vertices (random recursive attachment) with
// edge lengths in (0, 1].
Dendrite random_dendrite(int n, std::uint64_t seed);

// Uniformly random point (uniform edge, uniform coordinate); vertex 0 for a
// single-vertex dendrite.
template <class Rng>
DPoint random_point(const Dendrite& X, Rng& rng);

} // namespace dendro

#include <random>

namespace dendro {

template <class Rng>
DPoint random_point(const Dendrite& X, Rng& rng) {
    if (X.edge_count() == 0) return X.vertex(0);
    std::uniform_int_distribution<int> pick(0, X.edge_count() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int e = pick(rng);
    return X.point(e, unit(rng));
}

} // namespace dendro
