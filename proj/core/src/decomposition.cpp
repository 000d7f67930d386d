#include "dendro/decomposition.hpp"

#include "dendro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dendro {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

Cell make_cell(const Dendrite& X, Subdendrite body, std::vector<DPoint> boundary) {
    Cell c;
    c.diameter = diameter(X, body);
    c.body = std::move(body);
    c.boundary = std::move(boundary);
    return c;
}

// Vertex-group cells for the current cut counts; `group_edges` receives the
// edges touching each group (for refinement).
std::vector<Cell> vertex_cells(const Dendrite& X, const std::vector<int>& cuts,
                               std::vector<std::vector<int>>& group_edges) {
    UnionFind uf(X.vertex_count());
    for (int e = 0; e < X.edge_count(); ++e) {
        if (cuts[e] == 1) uf.unite(X.edge(e).u, X.edge(e).v);
    }
    std::vector<int> roots;
    for (int v = 0; v < X.vertex_count(); ++v) {
        if (uf.find(v) == v) roots.push_back(v);
    }
    std::vector<SubdendriteBuilder> builders(roots.size(), SubdendriteBuilder(X));
    std::vector<std::vector<DPoint>> bnd(roots.size());
    group_edges.assign(roots.size(), {});
    auto group = [&](int v) {
        return static_cast<int>(std::lower_bound(roots.begin(), roots.end(), uf.find(v)) - roots.begin());
    };
    for (int v = 0; v < X.vertex_count(); ++v) builders[group(v)].add_vertex(v);
    for (int e = 0; e < X.edge_count(); ++e) {
        const Edge& E = X.edge(e);
        const int m = cuts[e];
        const int gu = group(E.u), gv = group(E.v);
        if (m == 1) {
            builders[gu].add_edge(e);
            group_edges[gu].push_back(e);
            continue;
        }
        const double a = 1.0 / m, b = static_cast<double>(m - 1) / m;
        builders[gu].add_interval(e, 0.0, a);
        bnd[gu].push_back(X.point(e, a));
        group_edges[gu].push_back(e);
        builders[gv].add_interval(e, b, 1.0);
        bnd[gv].push_back(X.point(e, b));
        group_edges[gv].push_back(e);
    }
    std::vector<Cell> out;
    for (std::size_t g = 0; g < roots.size(); ++g) out.push_back(make_cell(X, builders[g].build(), bnd[g]));
    return out;
}

bool is_node(const Dendrite& X, const std::vector<DPoint>& nodes, const DPoint& p) {
    return std::any_of(nodes.begin(), nodes.end(), [&](const DPoint& q) { return X.same_point(p, q); });
}

} // namespace

std::vector<Cell> coarse_decompose(const Dendrite& X, double delta) {
    if (!(delta > 0.0)) throw DomainError("decomposition needs delta > 0");
    std::vector<int> cuts(X.edge_count());
    for (int e = 0; e < X.edge_count(); ++e) cuts[e] = static_cast<int>(std::floor(X.edge(e).length / delta)) + 1;
    // Edges short enough for no cut stay whole; long ones get pieces < delta.
    std::vector<std::vector<int>> group_edges;
    std::vector<Cell> groups;
    for (;;) {
        groups = vertex_cells(X, cuts, group_edges);
        bool changed = false;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].diameter < delta) continue;
            int best = -1;
            double best_piece = -1.0;
            for (int e : group_edges[g]) {
                const double piece = X.edge(e).length / cuts[e];
                if (piece > best_piece) {
                    best_piece = piece;
                    best = e;
                }
            }
            if (best < 0) throw InternalError("oversized cell without edges");
            ++cuts[best];
            changed = true;
            break;
        }
        if (!changed) break;
    }
    std::vector<Cell> out = std::move(groups);
    for (int e = 0; e < X.edge_count(); ++e) {
        const int m = cuts[e];
        for (int k = 1; k + 1 < m; ++k) {
            const double a = static_cast<double>(k) / m, b = static_cast<double>(k + 1) / m;
            out.push_back(make_cell(X, SubdendriteBuilder(X).add_interval(e, a, b).build(),
                                    {X.point(e, a), X.point(e, b)}));
        }
    }
    return out;
}

std::vector<Cell> refine_cell(const Dendrite& X, const Cell& V) {
    const std::size_t p = V.boundary.size();
    if (p == 0) {
        if (!is_subset(X, whole(X), V.body)) throw InternalError("cell without boundary is not the whole dendrite");
        return {V};
    }
    if (p <= 2) return {V};

    const Subdendrite T = convex_hull(X, V.boundary);
    std::vector<DPoint> nodes = V.boundary;
    for (int v : T.vertices) {
        const DPoint pv = DPoint::at_vertex(v);
        if (order_in(X, T, pv) >= 3) nodes.push_back(pv);
    }

    struct Piece {
        SubdendriteBuilder body;
        std::vector<DPoint> boundary;
        Subdendrite arc_set;
    };
    std::vector<Piece> arcs;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const double dij = X.distance(nodes[i], nodes[j]);
            bool direct = true;
            for (std::size_t k = 0; k < nodes.size() && direct; ++k) {
                if (k == i || k == j) continue;
                const double detour = X.distance(nodes[i], nodes[k]) + X.distance(nodes[k], nodes[j]) - dij;
                if (detour <= 1e-12 * std::max(1.0, dij)) direct = false;
            }
            if (!direct) continue;
            Arc a = arc(X, nodes[i], nodes[j]);
            Piece pc{SubdendriteBuilder(X), {nodes[i], nodes[j]}, a.set};
            pc.body.add(a.set);
            arcs.push_back(std::move(pc));
        }
    }

    std::vector<Cell> own;
    for (const Component& comp : components_minus(X, T, &V.body)) {
        if (is_node(X, nodes, comp.attachment)) {
            own.push_back(make_cell(X, comp.closure, {comp.attachment}));
            continue;
        }
        bool placed = false;
        for (Piece& pc : arcs) {
            if (contains(X, pc.arc_set, comp.attachment)) {
                pc.body.add(comp.closure);
                placed = true;
                break;
            }
        }
        if (!placed) throw InternalError("component attaches outside the boundary hull: " + to_string(comp.attachment));
    }
    std::vector<Cell> out;
    for (Piece& pc : arcs) out.push_back(make_cell(X, pc.body.build(), pc.boundary));
    out.insert(out.end(), own.begin(), own.end());
    return out;
}

DecompositionCheck verify_decomposition(const Dendrite& X, const std::vector<Cell>& cells, double delta) {
    DecompositionCheck chk;
    std::ostringstream why;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Cell& c = cells[i];
        if (!(diameter(X, c.body) < delta)) {
            chk.diameter = false;
            why << "cell " << i << " diameter " << diameter(X, c.body) << " >= delta; ";
        }
        if (c.boundary.size() > 2) {
            chk.boundary = false;
            why << "cell " << i << " has " << c.boundary.size() << " boundary points; ";
        }
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            const Subdendrite I = intersect(X, c.body, cells[j].body);
            if (!I.empty() && (length(X, I) > 1e-12 || diameter(X, I) > kPointTol)) {
                chk.overlap = false;
                why << "cells " << i << "," << j << " share more than a point; ";
            }
        }
    }
    const CellLocator loc(X, cells);
    const double spacing = std::max(delta / 10.0, 1e-12);
    for (const DPoint& x : grid(X, whole(X), spacing)) {
        const auto in = loc.containing(x);
        if (in.empty()) {
            chk.cover = false;
            why << "uncovered point " << to_string(x) << "; ";
            break;
        }
        double sum = 0.0;
        for (int i : in) sum += loc.psi(i, x);
        if (std::abs(sum - 1.0) > 1e-12) {
            chk.unity = false;
            why << "psi sum " << sum << " at " << to_string(x) << "; ";
            break;
        }
    }
    chk.detail = why.str();
    return chk;
}

Decomposition decompose(const Dendrite& X, double delta) {
    Decomposition out;
    for (const Cell& V : coarse_decompose(X, delta)) {
        auto refined = refine_cell(X, V);
        out.cells.insert(out.cells.end(), refined.begin(), refined.end());
    }
    const auto chk = verify_decomposition(X, out.cells, delta);
    if (!chk.ok()) throw InternalError("decomposition failed its re-check: " + chk.detail);
    const CellLocator loc(X, out.cells);
    std::vector<DPoint> seen;
    for (const Cell& c : out.cells) {
        for (const DPoint& b : c.boundary) {
            if (is_node(X, seen, b)) continue;
            seen.push_back(b);
            if (static_cast<int>(loc.containing(b).size()) != order(X, b)) ++out.order_deviations;
        }
    }
    return out;
}

CellLocator::CellLocator(const Dendrite& X, std::vector<Cell> cells)
    : X_(&X), cells_(std::move(cells)), by_edge_(X.edge_count()), by_vertex_(X.vertex_count()) {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        for (const Interval& I : cells_[i].body.intervals) by_edge_[I.edge].push_back(static_cast<int>(i));
        for (int v : cells_[i].body.vertices) by_vertex_[v].push_back(static_cast<int>(i));
    }
}

std::vector<int> CellLocator::containing(const DPoint& x) const {
    std::vector<int> out;
    if (x.is_vertex()) return by_vertex_.at(x.vertex);
    for (int i : by_edge_.at(x.edge)) {
        if (contains(*X_, cells_[i].body, x)) out.push_back(i);
    }
    return out;
}

double CellLocator::psi(int cell, const DPoint& x) const {
    const auto in = containing(x);
    if (std::find(in.begin(), in.end(), cell) == in.end()) return 0.0;
    return 1.0 / static_cast<double>(in.size());
}

StepObservable step_function(const CellLocator& cells, int i) {
    if (i < 0 || i >= static_cast<int>(cells.cells().size())) throw DomainError("no cell " + std::to_string(i));
    return StepObservable{&cells, i};
}

Observable constant_observable(double c) {
    return Observable{[c](const DPoint&) { return c; }, "const", 0.0};
}

Observable distance_observable(const Dendrite& X, const DPoint& base) {
    X.check(base);
    return Observable{[&X, base](const DPoint& p) { return X.distance(p, base); }, "dist:" + to_string(base), 1.0};
}

DPoint interior_sample(const Dendrite& X, const Cell& c) {
    const Interval* best = nullptr;
    for (const Interval& I : c.body.intervals) {
        if (I.hi > I.lo && (!best || (I.hi - I.lo) * X.edge(I.edge).length >
                                         (best->hi - best->lo) * X.edge(best->edge).length)) {
            best = &I;
        }
    }
    if (best) return X.point(best->edge, 0.5 * (best->lo + best->hi));
    if (c.boundary.empty() && c.body.vertices.size() == 1) return DPoint::at_vertex(c.body.vertices.front());
    throw DomainError("cell has empty interior");
}

double StepApproximation::operator()(const CellLocator& cells, const DPoint& x) const {
    double s = 0.0;
    for (int i : cells.containing(x)) s += coeffs[i] * cells.psi(i, x);
    return s;
}

StepApproximation approximate(const Observable& phi, const CellLocator& cells) {
    StepApproximation out;
    double max_diam = 0.0;
    for (const Cell& c : cells.cells()) {
        const DPoint y = interior_sample(cells.domain(), c);
        out.samples.push_back(y);
        out.coeffs.push_back(phi.fn(y));
        max_diam = std::max(max_diam, c.diameter);
    }
    out.bound = phi.lipschitz * max_diam;
    return out;
}

} // namespace dendro
