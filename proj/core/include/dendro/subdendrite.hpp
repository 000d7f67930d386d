#pragma once

#include "dendro/dendrite.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace dendro {

// Closed interval [lo, hi] of edge coordinates on one edge.
struct Interval {
    int edge = -1;
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

// Closed connected subset of a dendrite. Stored as at most one interval per
// edge (intersections of a subtree with an edge are connected) plus the set of
// contained vertices. Intervals that degenerate onto a vertex are dropped in
// favour of the vertex; an isolated interior point is a zero-length interval.
struct Subdendrite {
    std::vector<Interval> intervals; // sorted by edge
    std::vector<int> vertices;       // sorted

    bool empty() const { return intervals.empty() && vertices.empty(); }
    const Interval* on_edge(int e) const;

    friend bool operator==(const Subdendrite&, const Subdendrite&) = default;
};

// Accumulates pieces of a connected set. Intervals on the same edge are merged
// by their convex span, which is exact as long as the union being built is
// connected.
class SubdendriteBuilder {
public:
    explicit SubdendriteBuilder(const Dendrite& X) : X_(&X) {}

    SubdendriteBuilder& add_point(const DPoint& p);
    SubdendriteBuilder& add_vertex(int v);
    SubdendriteBuilder& add_interval(int e, double a, double b);
    SubdendriteBuilder& add_edge(int e) { return add_interval(e, 0.0, 1.0); }
    SubdendriteBuilder& add(const Subdendrite& s);
    SubdendriteBuilder& add_arc(const ArcPath& arc);

    Subdendrite build() const;

private:
    const Dendrite* X_;
    std::map<int, std::pair<double, double>> spans_;
    std::vector<int> vertices_;
};

Subdendrite whole(const Dendrite& X);
Subdendrite singleton(const Dendrite& X, const DPoint& p);

bool contains(const Dendrite& X, const Subdendrite& Y, const DPoint& p, double tol = kPointTol);

struct Arc {
    Subdendrite set;
    double length = 0.0;
};

// The unique arc [x, y] with its length d(x, y).
Arc arc(const Dendrite& X, const DPoint& x, const DPoint& y);

// Extreme points of Y: contained vertices plus interior interval ends. Every
// endpoint of Y and every point where X leaves Y is among them.
std::vector<DPoint> nodes(const Dendrite& X, const Subdendrite& Y);

// Retraction r_Y: x itself on Y, otherwise the unique gate point of Y on every
// arc from x into Y (equivalently the nearest point of Y).
DPoint first_point_map(const Dendrite& X, const Subdendrite& Y, const DPoint& x);
double distance_to(const Dendrite& X, const Subdendrite& Y, const DPoint& x);

// Smallest subdendrite containing F, built as the union of arcs [F[0], z].
Subdendrite convex_hull(const Dendrite& X, std::span<const DPoint> F);
// Same set, built from an arbitrary anchor F[anchor].
Subdendrite convex_hull_from(const Dendrite& X, std::span<const DPoint> F, std::size_t anchor);

// Order of p inside Y (number of components of Y minus p).
int order_in(const Dendrite& X, const Subdendrite& Y, const DPoint& p);
// E(Y): points of order 1 in Y (the single point for a singleton).
std::vector<DPoint> endpoints(const Dendrite& X, const Subdendrite& Y);
// Points of Y where X continues outside Y.
std::vector<DPoint> frontier(const Dendrite& X, const Subdendrite& Y);

double length(const Dendrite& X, const Subdendrite& Y);
double diameter(const Dendrite& X, const Subdendrite& Y);

Subdendrite intersect(const Dendrite& X, const Subdendrite& A, const Subdendrite& B);
// A subset of B, up to distance tol.
bool is_subset(const Dendrite& X, const Subdendrite& A, const Subdendrite& B, double tol = kPointTol);
// Distance between disjoint subdendrites; 0 when they meet.
double gap(const Dendrite& X, const Subdendrite& A, const Subdendrite& B);

struct Component {
    Subdendrite closure; // component together with its attachment point
    DPoint attachment;   // r_Y of the component
};

// Components of X minus Y, or of `within` minus Y when `within` is given
// (Y need not lie inside `within`; only their intersection matters).
std::vector<Component> components_minus(const Dendrite& X, const Subdendrite& Y,
                                        const Subdendrite* within = nullptr);

// Points of Y spaced at most `spacing` apart along every interval, including
// all nodes.
std::vector<DPoint> grid(const Dendrite& X, const Subdendrite& Y, double spacing);

} // namespace dendro
