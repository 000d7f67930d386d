#include "dendro/subdendrite.hpp"

#include "dendro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dendro {

namespace {

bool point_less(const DPoint& a, const DPoint& b) {
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.t < b.t;
}

void sort_unique(std::vector<DPoint>& pts) {
    std::sort(pts.begin(), pts.end(), point_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

bool has_vertex(const Subdendrite& Y, int v) {
    return std::binary_search(Y.vertices.begin(), Y.vertices.end(), v);
}

// Does Y cover a positive-length stretch of edge e starting at its end w?
bool leaves_through(const Dendrite& X, const Subdendrite& Y, int e, int w) {
    const Interval* I = Y.on_edge(e);
    if (!I || I->hi <= I->lo) return false;
    return X.edge(e).u == w ? I->lo == 0.0 : I->hi == 1.0;
}

} // namespace

const Interval* Subdendrite::on_edge(int e) const {
    auto it = std::lower_bound(intervals.begin(), intervals.end(), e,
                               [](const Interval& i, int edge) { return i.edge < edge; });
    return it != intervals.end() && it->edge == e ? &*it : nullptr;
}

SubdendriteBuilder& SubdendriteBuilder::add_point(const DPoint& p) {
    X_->check(p);
    if (p.is_vertex()) return add_vertex(p.vertex);
    return add_interval(p.edge, p.t, p.t);
}

SubdendriteBuilder& SubdendriteBuilder::add_vertex(int v) {
    vertices_.push_back(v);
    return *this;
}

SubdendriteBuilder& SubdendriteBuilder::add_interval(int e, double a, double b) {
    if (a > b) std::swap(a, b);
    auto [it, inserted] = spans_.try_emplace(e, a, b);
    if (!inserted) {
        it->second.first = std::min(it->second.first, a);
        it->second.second = std::max(it->second.second, b);
    }
    return *this;
}

SubdendriteBuilder& SubdendriteBuilder::add(const Subdendrite& s) {
    for (const auto& I : s.intervals) add_interval(I.edge, I.lo, I.hi);
    for (int v : s.vertices) add_vertex(v);
    return *this;
}

SubdendriteBuilder& SubdendriteBuilder::add_arc(const ArcPath& arc) {
    add_point(arc.from);
    add_point(arc.to);
    for (const auto& piece : arc.pieces) add_interval(piece.edge, piece.t0, piece.t1);
    return *this;
}

Subdendrite SubdendriteBuilder::build() const {
    Subdendrite out;
    std::vector<int> verts = vertices_;
    for (auto [e, span] : spans_) {
        double lo = std::clamp(span.first, 0.0, 1.0);
        double hi = std::clamp(span.second, 0.0, 1.0);
        if (lo <= kPointTol) lo = 0.0;
        if (hi >= 1.0 - kPointTol) hi = 1.0;
        const Edge& edge = X_->edge(e);
        if (hi <= kPointTol) {
            verts.push_back(edge.u);
            continue;
        }
        if (lo >= 1.0 - kPointTol) {
            verts.push_back(edge.v);
            continue;
        }
        if (lo == 0.0) verts.push_back(edge.u);
        if (hi == 1.0) verts.push_back(edge.v);
        out.intervals.push_back({e, lo, hi});
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    out.vertices = std::move(verts);
    return out;
}

Subdendrite whole(const Dendrite& X) {
    SubdendriteBuilder b(X);
    b.add_vertex(0);
    for (int e = 0; e < X.edge_count(); ++e) b.add_edge(e);
    return b.build();
}

Subdendrite singleton(const Dendrite& X, const DPoint& p) {
    return SubdendriteBuilder(X).add_point(p).build();
}

bool contains(const Dendrite& X, const Subdendrite& Y, const DPoint& p, double tol) {
    if (p.is_vertex()) return has_vertex(Y, p.vertex);
    const Interval* I = Y.on_edge(p.edge);
    if (I) return p.t >= I->lo - tol && p.t <= I->hi + tol;
    const Edge& e = X.edge(p.edge);
    return (p.t <= tol && has_vertex(Y, e.u)) || (1.0 - p.t <= tol && has_vertex(Y, e.v));
}

Arc arc(const Dendrite& X, const DPoint& x, const DPoint& y) {
    X.check(x);
    X.check(y);
    const ArcPath p = X.path(x, y);
    return {SubdendriteBuilder(X).add_arc(p).build(), p.length};
}

std::vector<DPoint> nodes(const Dendrite& X, const Subdendrite& Y) {
    std::vector<DPoint> out;
    out.reserve(Y.vertices.size() + 2 * Y.intervals.size());
    for (int v : Y.vertices) out.push_back(DPoint::at_vertex(v));
    for (const auto& I : Y.intervals) {
        if (I.lo > 0.0) out.push_back(X.point(I.edge, I.lo));
        if (I.hi < 1.0 && I.hi != I.lo) out.push_back(X.point(I.edge, I.hi));
    }
    return out;
}

DPoint first_point_map(const Dendrite& X, const Subdendrite& Y, const DPoint& x) {
    if (Y.empty()) throw DomainError("first point map onto an empty set");
    X.check(x);
    if (contains(X, Y, x)) return x;
    DPoint best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const DPoint& n : nodes(X, Y)) {
        const double d = X.distance(x, n);
        if (d < best_d) {
            best_d = d;
            best = n;
        }
    }
    return best;
}

double distance_to(const Dendrite& X, const Subdendrite& Y, const DPoint& x) {
    return X.distance(x, first_point_map(X, Y, x));
}

Subdendrite convex_hull_from(const Dendrite& X, std::span<const DPoint> F, std::size_t anchor) {
    if (F.empty()) throw DomainError("convex hull of an empty set");
    SubdendriteBuilder b(X);
    const DPoint& a = F[anchor];
    b.add_point(a);
    for (const DPoint& z : F) {
        X.check(z);
        b.add_arc(X.path(a, z));
    }
    return b.build();
}

Subdendrite convex_hull(const Dendrite& X, std::span<const DPoint> F) {
    return convex_hull_from(X, F, 0);
}

int order_in(const Dendrite& X, const Subdendrite& Y, const DPoint& p) {
    if (!contains(X, Y, p)) throw DomainError("point " + to_string(p) + " is not in the subdendrite");
    if (p.is_vertex()) {
        int count = 0;
        for (int e : X.incident(p.vertex)) count += leaves_through(X, Y, e, p.vertex) ? 1 : 0;
        return count;
    }
    const Interval* I = Y.on_edge(p.edge);
    if (!I) return 0;
    return (p.t > I->lo + kPointTol ? 1 : 0) + (p.t < I->hi - kPointTol ? 1 : 0);
}

std::vector<DPoint> endpoints(const Dendrite& X, const Subdendrite& Y) {
    std::vector<DPoint> out;
    const auto ns = nodes(X, Y);
    for (const DPoint& n : ns) {
        if (order_in(X, Y, n) <= 1) out.push_back(n);
    }
    return out;
}

std::vector<DPoint> frontier(const Dendrite& X, const Subdendrite& Y) {
    std::vector<DPoint> out;
    for (int v : Y.vertices) {
        for (int e : X.incident(v)) {
            if (!leaves_through(X, Y, e, v)) {
                out.push_back(DPoint::at_vertex(v));
                break;
            }
        }
    }
    for (const auto& I : Y.intervals) {
        if (I.lo > 0.0) out.push_back(X.point(I.edge, I.lo));
        if (I.hi < 1.0 && I.hi != I.lo) out.push_back(X.point(I.edge, I.hi));
    }
    sort_unique(out);
    return out;
}

double length(const Dendrite& X, const Subdendrite& Y) {
    double total = 0.0;
    for (const auto& I : Y.intervals) total += (I.hi - I.lo) * X.edge(I.edge).length;
    return total;
}

double diameter(const Dendrite& X, const Subdendrite& Y) {
    const auto ns = nodes(X, Y);
    if (ns.size() < 2) return 0.0;
    auto farthest = [&](const DPoint& from) {
        std::size_t best = 0;
        double best_d = -1.0;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double d = X.distance(from, ns[i]);
            if (d > best_d) {
                best_d = d;
                best = i;
            }
        }
        return std::make_pair(best, best_d);
    };
    const auto [a, unused] = farthest(ns[0]);
    (void)unused;
    return farthest(ns[a]).second;
}

Subdendrite intersect(const Dendrite& X, const Subdendrite& A, const Subdendrite& B) {
    SubdendriteBuilder b(X);
    for (const auto& I : A.intervals) {
        if (const Interval* J = B.on_edge(I.edge)) {
            const double lo = std::max(I.lo, J->lo), hi = std::min(I.hi, J->hi);
            if (lo <= hi + kPointTol) b.add_interval(I.edge, lo, std::max(lo, hi));
        }
    }
    std::vector<int> common;
    std::set_intersection(A.vertices.begin(), A.vertices.end(), B.vertices.begin(), B.vertices.end(),
                          std::back_inserter(common));
    for (int v : common) b.add_vertex(v);
    return b.build();
}

bool is_subset(const Dendrite& X, const Subdendrite& A, const Subdendrite& B, double tol) {
    if (A.empty()) return true;
    if (B.empty()) return false;
    for (const DPoint& n : nodes(X, A)) {
        if (distance_to(X, B, n) > tol) return false;
    }
    return true;
}

double gap(const Dendrite& X, const Subdendrite& A, const Subdendrite& B) {
    if (A.empty() || B.empty()) return std::numeric_limits<double>::infinity();
    const DPoint q = first_point_map(X, B, nodes(X, A).front());
    const DPoint p = first_point_map(X, A, q);
    return X.distance(p, q);
}

namespace {

struct ComponentWalker {
    const Dendrite& X;
    const Subdendrite* within;

    // Extent of the ambient set on edge e; full edge when unrestricted.
    std::optional<std::pair<double, double>> extent(int e) const {
        if (!within) return std::make_pair(0.0, 1.0);
        const Interval* I = within->on_edge(e);
        if (!I) return std::nullopt;
        return std::make_pair(I->lo, I->hi);
    }

    // Ambient stretch of edge e leaving vertex z with positive length.
    std::optional<std::pair<double, double>> leaving(int e, int z) const {
        auto ext = extent(e);
        if (!ext || ext->second <= ext->first) return std::nullopt;
        const bool at_u = X.edge(e).u == z;
        if (at_u ? ext->first != 0.0 : ext->second != 1.0) return std::nullopt;
        return ext;
    }

    void flood(int z, int from_edge, SubdendriteBuilder& b) const {
        b.add_vertex(z);
        for (int e : X.incident(z)) {
            if (e == from_edge) continue;
            auto ext = leaving(e, z);
            if (!ext) continue;
            b.add_interval(e, ext->first, ext->second);
            if (ext->first == 0.0 && ext->second == 1.0) flood(X.other_end(e, z), e, b);
        }
    }
};

} // namespace

std::vector<Component> components_minus(const Dendrite& X, const Subdendrite& Y, const Subdendrite* within) {
    if (Y.empty()) throw DomainError("components_minus needs a nonempty subdendrite");
    ComponentWalker walk{X, within};
    std::vector<Component> out;

    const Subdendrite core = within ? intersect(X, *within, Y) : Y;
    if (core.empty()) {
        const Subdendrite& M = *within;
        if (!M.empty()) out.push_back({M, first_point_map(X, Y, nodes(X, M).front())});
        return out;
    }

    for (int w : core.vertices) {
        for (int e : X.incident(w)) {
            if (leaves_through(X, Y, e, w)) continue;
            auto ext = walk.leaving(e, w);
            if (!ext) continue;
            SubdendriteBuilder b(X);
            b.add_vertex(w);
            b.add_interval(e, ext->first, ext->second);
            if (ext->first == 0.0 && ext->second == 1.0) walk.flood(X.other_end(e, w), e, b);
            out.push_back({b.build(), DPoint::at_vertex(w)});
        }
    }
    for (const auto& I : core.intervals) {
        const Interval* YI = Y.on_edge(I.edge);
        auto ext = walk.extent(I.edge);
        if (!YI || !ext) continue;
        const Edge& edge = X.edge(I.edge);
        if (YI->lo > 0.0 && ext->first < YI->lo) {
            SubdendriteBuilder b(X);
            b.add_interval(I.edge, ext->first, YI->lo);
            if (ext->first == 0.0) walk.flood(edge.u, I.edge, b);
            out.push_back({b.build(), X.point(I.edge, YI->lo)});
        }
        if (YI->hi < 1.0 && ext->second > YI->hi) {
            SubdendriteBuilder b(X);
            b.add_interval(I.edge, YI->hi, ext->second);
            if (ext->second == 1.0) walk.flood(edge.v, I.edge, b);
            out.push_back({b.build(), X.point(I.edge, YI->hi)});
        }
    }
    return out;
}

std::vector<DPoint> grid(const Dendrite& X, const Subdendrite& Y, double spacing) {
    if (!(spacing > 0.0)) throw DomainError("grid spacing must be positive");
    std::vector<DPoint> out;
    for (int v : Y.vertices) out.push_back(DPoint::at_vertex(v));
    for (const auto& I : Y.intervals) {
        const double len = (I.hi - I.lo) * X.edge(I.edge).length;
        const int m = std::max(1, static_cast<int>(std::ceil(len / spacing)));
        for (int k = 0; k <= m; ++k) {
            const double t = k == m ? I.hi : I.lo + (I.hi - I.lo) * k / m;
            out.push_back(X.point(I.edge, t));
        }
    }
    sort_unique(out);
    return out;
}

} // namespace dendro
