#include "dendro/dendrite.hpp"

#include "dendro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace dendro {

std::string to_string(const DPoint& p) {
    std::ostringstream os;
    os.precision(17);
    if (p.is_vertex()) {
        os << "[" << p.vertex << "]";
    } else {
        os << "[" << p.edge << ", " << p.t << "]";
    }
    return os.str();
}

Dendrite::Dendrite(int vertex_count, std::vector<Edge> edges) : n_(vertex_count), edges_(std::move(edges)) {
    if (n_ < 1) throw DomainError("dendrite needs at least one vertex");
    if (static_cast<int>(edges_.size()) != n_ - 1) {
        throw DomainError("a tree on " + std::to_string(n_) + " vertices has " + std::to_string(n_ - 1) +
                          " edges, got " + std::to_string(edges_.size()));
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto& e = edges_[i];
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
            throw DomainError("edge " + std::to_string(i) + " references a vertex out of range");
        }
        if (e.u == e.v) throw DomainError("edge " + std::to_string(i) + " is a loop");
        if (!(e.length > 0.0) || !std::isfinite(e.length)) {
            throw DomainError("edge " + std::to_string(i) + " has non-positive length");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }

    // Cycle check by union-find in input order, so the error names the first
    // edge that closes a cycle.
    std::vector<int> uf(n_);
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int a) {
        while (uf[a] != a) a = uf[a] = uf[uf[a]];
        return a;
    };
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const int a = find(edges_[i].u), b = find(edges_[i].v);
        if (a == b) {
            throw DomainError("edge " + std::to_string(i) + " (" + std::to_string(edges_[i].u) + ", " +
                              std::to_string(edges_[i].v) + ") closes a cycle");
        }
        uf[a] = b;
    }

    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });

    std::vector<int> deg(n_, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
        total_length_ += e.length;
    }
    adj_offset_.assign(n_ + 1, 0);
    for (int v = 0; v < n_; ++v) adj_offset_[v + 1] = adj_offset_[v] + deg[v];
    adj_.assign(adj_offset_[n_], 0);
    std::vector<int> fill(adj_offset_.begin(), adj_offset_.end() - 1);
    for (int e = 0; e < edge_count(); ++e) {
        adj_[fill[edges_[e].u]++] = e;
        adj_[fill[edges_[e].v]++] = e;
    }

    parent_.assign(n_, -1);
    parent_edge_.assign(n_, -1);
    depth_.assign(n_, 0);
    root_dist_.assign(n_, 0.0);
    std::vector<int> order;
    order.reserve(n_);
    order.push_back(0);
    std::vector<char> seen(n_, 0);
    seen[0] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const int v = order[head];
        for (int e : incident(v)) {
            const int w = other_end(e, v);
            if (seen[w]) continue;
            seen[w] = 1;
            parent_[w] = v;
            parent_edge_[w] = e;
            depth_[w] = depth_[v] + 1;
            root_dist_[w] = root_dist_[v] + edges_[e].length;
            order.push_back(w);
        }
    }
    if (static_cast<int>(order.size()) != n_) throw DomainError("dendrite is disconnected");

    int levels = 1;
    while ((1 << levels) < n_) ++levels;
    up_.assign(levels, std::vector<int>(n_, 0));
    for (int v = 0; v < n_; ++v) up_[0][v] = parent_[v] < 0 ? v : parent_[v];
    for (int k = 1; k < levels; ++k) {
        for (int v = 0; v < n_; ++v) up_[k][v] = up_[k - 1][up_[k - 1][v]];
    }
}

std::span<const int> Dendrite::incident(int v) const {
    return {adj_.data() + adj_offset_[v], adj_.data() + adj_offset_[v + 1]};
}

DPoint Dendrite::point(int e, double t) const {
    if (e < 0 || e >= edge_count()) throw DomainError("edge id " + std::to_string(e) + " out of range");
    if (!(t >= -kPointTol && t <= 1.0 + kPointTol)) {
        throw DomainError("edge coordinate " + std::to_string(t) + " outside [0,1]");
    }
    if (t <= kPointTol) return DPoint::at_vertex(edges_[e].u);
    if (t >= 1.0 - kPointTol) return DPoint::at_vertex(edges_[e].v);
    return DPoint{-1, e, t};
}

DPoint Dendrite::vertex(int v) const {
    if (v < 0 || v >= n_) throw DomainError("vertex id " + std::to_string(v) + " out of range");
    return DPoint::at_vertex(v);
}

DPoint Dendrite::point_at_length(int e, double s) const {
    return point(e, std::clamp(s / edges_.at(e).length, 0.0, 1.0));
}

bool Dendrite::valid(const DPoint& p) const {
    if (p.is_vertex()) return p.vertex < n_ && p.edge < 0;
    return p.edge >= 0 && p.edge < edge_count() && p.t > kPointTol && p.t < 1.0 - kPointTol;
}

void Dendrite::check(const DPoint& p) const {
    if (!valid(p)) throw DomainError("point " + to_string(p) + " does not lie on the dendrite");
}

DPoint Dendrite::canonical(const DPoint& p) const {
    if (p.is_vertex()) return vertex(p.vertex);
    return point(p.edge, p.t);
}

int Dendrite::lca(int a, int b) const {
    if (depth_[a] < depth_[b]) std::swap(a, b);
    int diff = depth_[a] - depth_[b];
    for (int k = 0; diff; ++k, diff >>= 1) {
        if (diff & 1) a = up_[k][a];
    }
    if (a == b) return a;
    for (int k = static_cast<int>(up_.size()) - 1; k >= 0; --k) {
        if (up_[k][a] != up_[k][b]) {
            a = up_[k][a];
            b = up_[k][b];
        }
    }
    return parent_[a];
}

double Dendrite::vertex_distance(int a, int b) const {
    return root_dist_[a] + root_dist_[b] - 2.0 * root_dist_[lca(a, b)];
}

int Dendrite::exits(const DPoint& p, int (&v)[2], double (&d)[2]) const {
    if (p.is_vertex()) {
        v[0] = p.vertex;
        d[0] = 0.0;
        return 1;
    }
    const Edge& e = edges_[p.edge];
    v[0] = e.u;
    d[0] = p.t * e.length;
    v[1] = e.v;
    d[1] = (1.0 - p.t) * e.length;
    return 2;
}

double Dendrite::distance(const DPoint& x, const DPoint& y) const {
    if (!x.is_vertex() && !y.is_vertex() && x.edge == y.edge) {
        return std::abs(x.t - y.t) * edges_[x.edge].length;
    }
    int xv[2], yv[2];
    double xd[2], yd[2];
    const int nx = exits(x, xv, xd), ny = exits(y, yv, yd);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            best = std::min(best, xd[i] + vertex_distance(xv[i], yv[j]) + yd[j]);
        }
    }
    return best;
}

bool Dendrite::same_point(const DPoint& x, const DPoint& y, double tol) const {
    if (x.is_vertex() && y.is_vertex()) return x.vertex == y.vertex;
    if (!x.is_vertex() && !y.is_vertex() && x.edge == y.edge) return std::abs(x.t - y.t) <= tol;
    // Mixed forms only coincide within tolerance of a shared vertex.
    const DPoint& iv = x.is_vertex() ? y : x;
    const DPoint& vv = x.is_vertex() ? x : y;
    const Edge& e = edges_[iv.edge];
    if (vv.vertex == e.u) return iv.t <= tol;
    if (vv.vertex == e.v) return 1.0 - iv.t <= tol;
    return false;
}

void Dendrite::append_vertex_path(int a, int b, std::vector<ArcPiece>& out, double& offset) const {
    const int c = lca(a, b);
    for (int v = a; v != c; v = parent_[v]) {
        const int e = parent_edge_[v];
        const double len = edges_[e].length;
        const bool forward = edges_[e].u == v;
        out.push_back({e, forward ? 0.0 : 1.0, forward ? 1.0 : 0.0, offset, len});
        offset += len;
    }
    std::vector<int> down;
    for (int v = b; v != c; v = parent_[v]) down.push_back(v);
    for (auto it = down.rbegin(); it != down.rend(); ++it) {
        const int e = parent_edge_[*it];
        const double len = edges_[e].length;
        const bool forward = edges_[e].v == *it;
        out.push_back({e, forward ? 0.0 : 1.0, forward ? 1.0 : 0.0, offset, len});
        offset += len;
    }
}

ArcPath Dendrite::path(const DPoint& x, const DPoint& y) const {
    ArcPath out{x, y, {}, 0.0};
    if (same_point(x, y, 0.0)) return out;
    if (!x.is_vertex() && !y.is_vertex() && x.edge == y.edge) {
        const double len = std::abs(x.t - y.t) * edges_[x.edge].length;
        out.pieces.push_back({x.edge, x.t, y.t, 0.0, len});
        out.length = len;
        return out;
    }
    int xv[2], yv[2];
    double xd[2], yd[2];
    const int nx = exits(x, xv, xd), ny = exits(y, yv, yd);
    int bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double d = xd[i] + vertex_distance(xv[i], yv[j]) + yd[j];
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    double offset = 0.0;
    if (!x.is_vertex() && xd[bi] > 0.0) {
        const double target = xv[bi] == edges_[x.edge].u ? 0.0 : 1.0;
        out.pieces.push_back({x.edge, x.t, target, 0.0, xd[bi]});
        offset = xd[bi];
    }
    append_vertex_path(xv[bi], yv[bj], out.pieces, offset);
    if (!y.is_vertex() && yd[bj] > 0.0) {
        const double source = yv[bj] == edges_[y.edge].u ? 0.0 : 1.0;
        out.pieces.push_back({y.edge, source, y.t, offset, yd[bj]});
        offset += yd[bj];
    }
    out.length = offset;
    return out;
}

DPoint Dendrite::point_along(const ArcPath& p, double s) const {
    if (p.pieces.empty() || s <= 0.0) return p.from;
    if (s >= p.length) return p.to;
    auto it = std::upper_bound(p.pieces.begin(), p.pieces.end(), s,
                               [](double v, const ArcPiece& piece) { return v < piece.start; });
    const ArcPiece& piece = *(it - 1);
    const double frac = std::clamp((s - piece.start) / piece.length, 0.0, 1.0);
    return point(piece.edge, piece.t0 + (piece.t1 - piece.t0) * frac);
}

std::vector<int> Dendrite::endpoints() const {
    std::vector<int> out;
    for (int v = 0; v < n_; ++v) {
        if (degree(v) == 1) out.push_back(v);
    }
    return out;
}

std::vector<int> Dendrite::branch_points() const {
    std::vector<int> out;
    for (int v = 0; v < n_; ++v) {
        if (degree(v) >= 3) out.push_back(v);
    }
    return out;
}

double Dendrite::diameter() const {
    auto farthest = [&](int from) {
        int best = from;
        for (int v = 0; v < n_; ++v) {
            if (vertex_distance(from, v) > vertex_distance(from, best)) best = v;
        }
        return best;
    };
    const int a = farthest(0);
    return vertex_distance(a, farthest(a));
}

int order(const Dendrite& X, const DPoint& p) {
    X.check(p);
    return p.is_vertex() ? X.degree(p.vertex) : 2;
}

Dendrite random_dendrite(int n, std::uint64_t seed) {
    if (n < 1) throw DomainError("random_dendrite needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> pick(0, v - 1);
        const int parent = pick(rng);
        edges.push_back({parent, v, 1.0 - unit(rng)});
    }
    return Dendrite(n, std::move(edges));
}

} // namespace dendro
