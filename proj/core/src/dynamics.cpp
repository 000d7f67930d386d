#include "dendro/dynamics.hpp"

#include "dendro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_map>

namespace dendro {

namespace {

constexpr double kCollapse = 1e-15;

void dedupe(const Dendrite& X, std::vector<DPoint>& pts, double tol) {
    std::vector<DPoint> out;
    for (const DPoint& p : pts) {
        bool dup = false;
        for (const DPoint& q : out) {
            if (X.distance(p, q) <= tol) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const DPoint& a, const DPoint& b) {
        if (a.vertex != b.vertex) return a.vertex > b.vertex; // vertices first
        if (a.edge != b.edge) return a.edge < b.edge;
        return a.t < b.t;
    });
    pts = std::move(out);
}

// Edge-e coordinate of p if p lies on the closed edge e.
std::optional<double> coordinate_on(const Dendrite& X, int e, const DPoint& p) {
    if (p.is_vertex()) {
        if (p.vertex == X.edge(e).u) return 0.0;
        if (p.vertex == X.edge(e).v) return 1.0;
        return std::nullopt;
    }
    if (p.edge == e) return p.t;
    return std::nullopt;
}

} // namespace

DendriteMap::DendriteMap(std::shared_ptr<const Dendrite> X, std::vector<DPoint> vertex_images,
                         std::vector<Subdivision> subdivisions)
    : X_(std::move(X)), vertex_images_(std::move(vertex_images)) {
    if (!X_) throw DomainError("map needs a dendrite");
    if (static_cast<int>(vertex_images_.size()) != X_->vertex_count()) {
        throw DomainError("map needs one image per vertex");
    }
    for (auto& img : vertex_images_) {
        X_->check(img);
        img = X_->canonical(img);
    }
    std::sort(subdivisions.begin(), subdivisions.end(), [](const Subdivision& a, const Subdivision& b) {
        return a.edge != b.edge ? a.edge < b.edge : a.t < b.t;
    });
    edges_.resize(X_->edge_count());
    for (int e = 0; e < X_->edge_count(); ++e) {
        edges_[e].ts.push_back(0.0);
        edges_[e].images.push_back(vertex_images_[X_->edge(e).u]);
    }
    for (const auto& s : subdivisions) {
        if (s.edge < 0 || s.edge >= X_->edge_count()) throw DomainError("subdivision on unknown edge");
        if (!(s.t > kPointTol && s.t < 1.0 - kPointTol)) {
            throw DomainError("subdivision coordinate must lie strictly inside (0,1)");
        }
        X_->check(s.image);
        auto& ed = edges_[s.edge];
        if (s.t - ed.ts.back() <= kPointTol) throw DomainError("duplicate subdivision on edge " + std::to_string(s.edge));
        ed.ts.push_back(s.t);
        ed.images.push_back(X_->canonical(s.image));
    }
    for (int e = 0; e < X_->edge_count(); ++e) {
        auto& ed = edges_[e];
        ed.ts.push_back(1.0);
        ed.images.push_back(vertex_images_[X_->edge(e).v]);
        for (std::size_t k = 0; k + 1 < ed.ts.size(); ++k) ed.arcs.push_back(X_->path(ed.images[k], ed.images[k + 1]));
    }
}

DPoint DendriteMap::operator()(const DPoint& p) const {
    if (p.is_vertex()) return vertex_images_.at(p.vertex);
    const EdgeData& ed = edges_.at(p.edge);
    auto it = std::upper_bound(ed.ts.begin(), ed.ts.end(), p.t);
    int k = static_cast<int>(it - ed.ts.begin()) - 1;
    k = std::clamp(k, 0, static_cast<int>(ed.arcs.size()) - 1);
    if (p.t == ed.ts[k]) return ed.images[k];
    const ArcPath& arc = ed.arcs[k];
    const double s = (p.t - ed.ts[k]) / (ed.ts[k + 1] - ed.ts[k]);
    return X_->point_along(arc, s * arc.length);
}

std::vector<Subdivision> DendriteMap::subdivisions() const {
    std::vector<Subdivision> out;
    for (int e = 0; e < X_->edge_count(); ++e) {
        const auto& ed = edges_[e];
        for (std::size_t k = 1; k + 1 < ed.ts.size(); ++k) out.push_back({e, ed.ts[k], ed.images[k]});
    }
    return out;
}

DendriteMap identity_map(std::shared_ptr<const Dendrite> X) {
    std::vector<DPoint> images;
    for (int v = 0; v < X->vertex_count(); ++v) images.push_back(DPoint::at_vertex(v));
    return DendriteMap(std::move(X), std::move(images));
}

DendriteMap compose(const DendriteMap& g, const DendriteMap& f) {
    const Dendrite& X = f.domain();
    if (&X != &g.domain()) throw DomainError("compose needs maps on the same dendrite");
    std::vector<DPoint> vimg;
    for (int v = 0; v < X.vertex_count(); ++v) vimg.push_back(g(f.vertex_image(v)));

    std::vector<Subdivision> subs;
    for (int e = 0; e < X.edge_count(); ++e) {
        const auto& ts = f.breakpoints(e);
        std::vector<std::pair<double, DPoint>> cuts; // (t, image under g o f)
        for (int k = 0; k < f.segment_count(e); ++k) {
            if (k > 0) cuts.emplace_back(ts[k], g(f.breakpoint_image(e, k)));
            const ArcPath& A = f.segment_arc(e, k);
            if (A.length <= kCollapse) continue;
            std::vector<double> cs;
            for (const ArcPiece& P : A.pieces) {
                if (P.start > 0.0) cs.push_back(P.start);
                const auto& gts = g.breakpoints(P.edge);
                const double lo = std::min(P.t0, P.t1), hi = std::max(P.t0, P.t1);
                for (std::size_t j = 1; j + 1 < gts.size(); ++j) {
                    if (gts[j] > lo && gts[j] < hi) {
                        cs.push_back(P.start + std::abs(gts[j] - P.t0) / std::abs(P.t1 - P.t0) * P.length);
                    }
                }
            }
            std::sort(cs.begin(), cs.end());
            for (double c : cs) {
                if (c <= 0.0 || c >= A.length) continue;
                const double t = ts[k] + c / A.length * (ts[k + 1] - ts[k]);
                cuts.emplace_back(t, g(X.point_along(A, c)));
            }
        }
        std::sort(cuts.begin(), cuts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        double prev = 0.0;
        for (const auto& [t, img] : cuts) {
            if (t - prev <= 1e-12 || t <= kPointTol || t >= 1.0 - kPointTol) continue;
            subs.push_back({e, t, img});
            prev = t;
        }
    }
    return DendriteMap(f.domain_ptr(), std::move(vimg), std::move(subs));
}

DendriteMap iterate(const DendriteMap& f, int k) {
    if (k < 0) throw DomainError("iterate needs k >= 0");
    if (k == 0) return identity_map(f.domain_ptr());
    DendriteMap out = f;
    for (int i = 1; i < k; ++i) out = compose(f, out);
    return out;
}

Subdendrite image(const DendriteMap& f, const Subdendrite& D) {
    if (D.empty()) return {};
    const Dendrite& X = f.domain();
    std::vector<DPoint> pts;
    for (const DPoint& n : nodes(X, D)) pts.push_back(f(n));
    for (const auto& I : D.intervals) {
        const auto& ts = f.breakpoints(I.edge);
        for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
            if (ts[k] > I.lo && ts[k] < I.hi) pts.push_back(f.breakpoint_image(I.edge, static_cast<int>(k)));
        }
    }
    return convex_hull(X, pts);
}

std::vector<DPoint> orbit(const DendriteMap& f, const DPoint& x, int N) {
    if (N < 0) throw DomainError("orbit length must be >= 0");
    f.domain().check(x);
    std::vector<DPoint> out;
    out.reserve(static_cast<std::size_t>(N) + 1);
    out.push_back(x);
    for (int n = 0; n < N; ++n) out.push_back(f(out.back()));
    return out;
}

std::vector<DPoint> tracked_orbit(const DendriteMap& f, const DPoint& x, int N, int* period, int* preperiod) {
    if (N < 0) throw DomainError("orbit length must be >= 0");
    const Dendrite& X = f.domain();
    X.check(x);
    auto key = [](const DPoint& p, long long shift) -> std::uint64_t {
        if (p.is_vertex()) return (static_cast<std::uint64_t>(p.vertex) << 1) | 1u;
        const auto cell = static_cast<long long>(std::floor(p.t / kPointTol)) + shift;
        return (static_cast<std::uint64_t>(p.edge) << 40) ^ (static_cast<std::uint64_t>(cell) << 1);
    };
    std::unordered_map<std::uint64_t, std::vector<int>> seen;
    std::vector<DPoint> out;
    out.reserve(static_cast<std::size_t>(N) + 1);
    out.push_back(x);
    seen[key(x, 0)].push_back(0);
    if (period) *period = 0;
    if (preperiod) *preperiod = 0;
    for (int n = 1; n <= N; ++n) {
        const DPoint y = f(out.back());
        int match = -1;
        for (long long s = -1; s <= 1 && match < 0; ++s) {
            if (y.is_vertex() && s != 0) continue;
            auto it = seen.find(key(y, s));
            if (it == seen.end()) continue;
            for (int m : it->second) {
                if (X.same_point(out[m], y)) {
                    match = m;
                    break;
                }
            }
        }
        if (match >= 0) {
            const int p = n - match;
            if (period) *period = p;
            if (preperiod) *preperiod = match;
            for (int i = n; i <= N; ++i) out.push_back(out[match + (i - match) % p]);
            return out;
        }
        seen[key(y, 0)].push_back(n);
        out.push_back(y);
    }
    return out;
}

OmegaApprox omega_limit(const DendriteMap& f, const DPoint& x, const OmegaOptions& opt) {
    if (opt.burn_in < 1 || opt.samples < 1 || !(opt.resolution > 0.0)) {
        throw DomainError("omega_limit needs B, M >= 1 and eps > 0");
    }
    const Dendrite& X = f.domain();
    OmegaApprox out;
    out.options = opt;
    int period = 0, pre = 0;
    const auto orb = tracked_orbit(f, x, opt.burn_in + opt.samples, &period, &pre);
    out.finite_cycle = period > 0 && pre <= opt.burn_in + opt.samples - period;
    out.period = period;
    out.preperiod = pre;
    for (int n = opt.burn_in; n <= opt.burn_in + opt.samples; ++n) {
        const DPoint& p = orb[n];
        bool covered = false;
        for (const DPoint& q : out.points) {
            if (X.distance(p, q) <= opt.resolution) {
                covered = true;
                break;
            }
        }
        if (!covered) out.points.push_back(p);
    }
    return out;
}

FixedPointSet fixed_points(const DendriteMap& f, double tol) {
    if (!(tol > 0.0)) throw DomainError("fixed_points needs tol > 0");
    const Dendrite& X = f.domain();
    FixedPointSet out;
    std::vector<DPoint> found;
    double fixed_length = 0.0;
    constexpr double kSolve = 1e-12;

    for (int v = 0; v < X.vertex_count(); ++v) {
        const DPoint p = DPoint::at_vertex(v);
        if (X.distance(f(p), p) <= tol) found.push_back(p);
    }
    for (int e = 0; e < X.edge_count(); ++e) {
        const auto& ts = f.breakpoints(e);
        const double len = X.edge(e).length;
        for (int k = 0; k < f.segment_count(e); ++k) {
            const double a = ts[k], delta = ts[k + 1] - ts[k];
            const ArcPath& A = f.segment_arc(e, k);
            if (A.length <= kCollapse) {
                if (auto tq = coordinate_on(X, e, A.from); tq && *tq >= a - kSolve && *tq <= a + delta + kSolve) {
                    found.push_back(X.point(e, std::clamp(*tq, 0.0, 1.0)));
                }
                continue;
            }
            for (const ArcPiece& P : A.pieces) {
                if (P.edge != e) continue;
                const double slope = (P.t1 - P.t0) / P.length;
                const double lhs = delta - A.length * slope;
                const double rhs = P.t0 - P.start * slope - a;
                const double s_lo = std::max(0.0, P.start / A.length);
                const double s_hi = std::min(1.0, (P.start + P.length) / A.length);
                if (std::abs(lhs) <= kSolve) {
                    if (std::abs(rhs) <= kSolve) {
                        out.has_continuum = true;
                        fixed_length += (s_hi - s_lo) * delta * len;
                        found.push_back(X.point(e, a + s_lo * delta));
                        found.push_back(X.point(e, a + s_hi * delta));
                    }
                    continue;
                }
                const double s = rhs / lhs;
                if (s >= s_lo - kSolve && s <= s_hi + kSolve) {
                    found.push_back(X.point(e, std::clamp(a + std::clamp(s, 0.0, 1.0) * delta, 0.0, 1.0)));
                }
            }
        }
    }
    if (out.has_continuum && fixed_length >= X.total_length() * (1.0 - 1e-9)) {
        out.entire_space = true;
        for (int v = 0; v < X.vertex_count(); ++v) found.push_back(DPoint::at_vertex(v));
    }
    const double residual = std::max(tol, 1e-9) * std::max(1.0, X.total_length());
    std::erase_if(found, [&](const DPoint& p) { return X.distance(f(p), p) > residual; });
    dedupe(X, found, tol);
    out.points = std::move(found);
    return out;
}

std::vector<PeriodicPoint> periodic_points(const DendriteMap& f, int max_period, double tol) {
    if (max_period < 1) throw DomainError("periodic_points needs max_period >= 1");
    const Dendrite& X = f.domain();
    std::vector<PeriodicPoint> out;
    DendriteMap fk = f;
    for (int k = 1; k <= max_period; ++k) {
        if (k > 1) fk = compose(f, fk);
        for (const DPoint& p : fixed_points(fk, tol).points) {
            const bool known = std::any_of(out.begin(), out.end(), [&](const PeriodicPoint& q) {
                return X.distance(q.point, p) <= tol;
            });
            if (known) continue;
            int period = k;
            DPoint y = p;
            for (int m = 1; m < k; ++m) {
                y = f(y);
                if (k % m == 0 && X.distance(y, p) <= std::max(tol, 1e-7)) {
                    period = m;
                    break;
                }
            }
            out.push_back({p, period});
        }
    }
    return out;
}

namespace {

std::vector<DPoint> preimage_once(const DendriteMap& f, const DPoint& q, double tol, bool& collapsed) {
    const Dendrite& X = f.domain();
    std::vector<DPoint> out;
    for (int v = 0; v < X.vertex_count(); ++v) {
        if (X.distance(f.vertex_image(v), q) <= tol) out.push_back(DPoint::at_vertex(v));
    }
    for (int e = 0; e < X.edge_count(); ++e) {
        const auto& ts = f.breakpoints(e);
        for (int k = 0; k < f.segment_count(e); ++k) {
            const ArcPath& A = f.segment_arc(e, k);
            if (A.length <= kCollapse) {
                if (X.distance(A.from, q) <= tol) {
                    collapsed = true;
                    out.push_back(X.point(e, ts[k]));
                    out.push_back(X.point(e, ts[k + 1]));
                }
                continue;
            }
            const double c = X.distance(A.from, q);
            if (std::abs(c + X.distance(q, A.to) - A.length) > tol) continue;
            const double s = std::clamp(c / A.length, 0.0, 1.0);
            out.push_back(X.point(e, ts[k] + s * (ts[k + 1] - ts[k])));
        }
    }
    return out;
}

} // namespace

PreimageSet preimages(const DendriteMap& f, const DPoint& p, int depth, double tol) {
    if (depth < 0) throw DomainError("preimages needs depth >= 0");
    const Dendrite& X = f.domain();
    X.check(p);
    PreimageSet out;
    std::vector<DPoint> all{p};
    std::vector<DPoint> level{p};
    for (int d = 1; d <= depth; ++d) {
        std::vector<DPoint> next;
        for (const DPoint& q : level) {
            auto pre = preimage_once(f, q, tol, out.collapsed);
            next.insert(next.end(), pre.begin(), pre.end());
        }
        dedupe(X, next, tol);
        all.insert(all.end(), next.begin(), next.end());
        level = std::move(next);
    }
    dedupe(X, all, tol);
    out.points = std::move(all);
    return out;
}

std::string to_string(PairClass c) {
    switch (c) {
    case PairClass::proximal_only: return "proximal_only";
    case PairClass::asymptotic: return "asymptotic";
    case PairClass::li_yorke_candidate: return "li_yorke_candidate";
    case PairClass::neither: return "neither";
    }
    return "unknown";
}

PairEvidence classify_pair(const DendriteMap& f, const DPoint& x, const DPoint& y, int horizon,
                           double delta_prox, double delta_asym) {
    if (horizon < 1 || !(delta_prox > 0.0) || !(delta_asym > 0.0)) {
        throw DomainError("classify_pair needs H >= 1 and positive thresholds");
    }
    const Dendrite& X = f.domain();
    const auto ox = orbit(f, x, horizon), oy = orbit(f, y, horizon);
    PairEvidence ev;
    ev.min_distance = X.distance(ox[0], oy[0]);
    ev.tail_start = (horizon + 1) / 2;
    for (int n = 0; n <= horizon; ++n) {
        const double d = X.distance(ox[n], oy[n]);
        if (d < ev.min_distance) {
            ev.min_distance = d;
            ev.argmin = n;
        }
        if (n >= ev.tail_start) {
            ev.tail_max = std::max(ev.tail_max, d);
            if (d > delta_asym) ++ev.tail_separations;
        }
    }
    const bool proximal = ev.min_distance < delta_prox;
    if (ev.tail_max <= delta_asym) {
        ev.label = PairClass::asymptotic;
    } else if (proximal) {
        ev.label = ev.tail_separations >= 2 ? PairClass::li_yorke_candidate : PairClass::proximal_only;
    } else {
        ev.label = PairClass::neither;
    }
    return ev;
}

} // namespace dendro
