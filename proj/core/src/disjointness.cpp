#include "dendro/disjointness.hpp"

#include "dendro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dendro {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::int64_t> normalize_checkpoints(std::vector<std::int64_t> cps, std::int64_t N) {
    if (cps.empty()) cps.push_back(N);
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    if (cps.front() < 1 || cps.back() > N) throw DomainError("checkpoints must lie in [1, N]");
    return cps;
}

double directed_hausdorff(const Dendrite& X, const std::vector<DPoint>& A, const std::vector<DPoint>& B) {
    double worst = 0.0;
    for (const DPoint& a : A) {
        double best = kInf;
        for (const DPoint& b : B) best = std::min(best, X.distance(a, b));
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff(const Dendrite& X, const std::vector<DPoint>& A, const std::vector<DPoint>& B) {
    if (A.empty() && B.empty()) return 0.0;
    if (A.empty() || B.empty()) return kInf;
    return std::max(directed_hausdorff(X, A, B), directed_hausdorff(X, B, A));
}

// Largest distance from a node of A to B (0 when A lies in B).
double excess(const Dendrite& X, const Subdendrite& A, const Subdendrite& B) {
    double worst = 0.0;
    for (const DPoint& p : nodes(X, A)) worst = std::max(worst, distance_to(X, B, p));
    return worst;
}

ConditionResult judge(bool pass, double margin, const std::string& detail) {
    return ConditionResult{pass, margin, detail};
}

} // namespace

std::vector<SumSeries> sarnak_sums(const DendriteMap& f, const DPoint& x, const std::vector<Observable>& phis,
                                   const SieveTable& table, std::int64_t N, std::vector<std::int64_t> checkpoints) {
    if (N < 1 || N > table.bound()) throw DomainError("sarnak sum: N outside the sieve range");
    if (N > std::numeric_limits<int>::max() - 1) throw DomainError("sarnak sum: N too large");
    const auto cps = normalize_checkpoints(std::move(checkpoints), N);
    const auto orb = tracked_orbit(f, x, static_cast<int>(N));
    std::vector<SumSeries> out(phis.size());
    std::vector<CompensatedSum> sums(phis.size());
    for (std::size_t i = 0; i < phis.size(); ++i) out[i].observable = phis[i].name;
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const int m = table.mu(n);
        if (m != 0) {
            for (std::size_t i = 0; i < phis.size(); ++i) sums[i].add(m * phis[i].fn(orb[static_cast<std::size_t>(n)]));
        }
        if (n == cps[next]) {
            for (std::size_t i = 0; i < phis.size(); ++i) {
                out[i].checkpoints.emplace_back(n, sums[i].value() / static_cast<double>(n));
            }
            ++next;
            if (next == cps.size()) break;
        }
    }
    return out;
}

SumSeries sarnak_sum(const DendriteMap& f, const DPoint& x, const Observable& phi, const SieveTable& table,
                     std::int64_t N, std::vector<std::int64_t> checkpoints) {
    return sarnak_sums(f, x, {phi}, table, N, std::move(checkpoints)).front();
}

std::int64_t PeriodicStructure::alpha(std::size_t k) const {
    if (k >= levels.size()) throw DomainError("structure has no level " + std::to_string(k));
    std::int64_t a = 1;
    for (std::size_t i = 0; i <= k; ++i) a *= levels[i].n;
    return a;
}

bool LevelReport::ok() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass; });
}

bool StructureReport::ok() const {
    return std::all_of(levels.begin(), levels.end(), [](const LevelReport& l) { return l.ok(); });
}

std::vector<Subdendrite> iterate_images(const DendriteMap& f, const Subdendrite& D, std::int64_t count) {
    std::vector<Subdendrite> out;
    if (count <= 0) return out;
    out.push_back(D);
    for (std::int64_t i = 1; i < count; ++i) out.push_back(image(f, out.back()));
    return out;
}

StructureReport verify_structure(const DendriteMap& f, const PeriodicStructure& S, const std::vector<DPoint>& L,
                                 double eps) {
    const Dendrite& X = f.domain();
    if (!(eps > 0.0)) throw DomainError("verify_structure needs eps > 0");
    if (S.levels.empty()) throw DomainError("structure has no levels");
    for (std::size_t k = 0; k < S.levels.size(); ++k) {
        if (S.levels[k].n < 2) throw DomainError("level " + std::to_string(k) + " has n < 2");
        if (S.levels[k].D.empty()) throw DomainError("level " + std::to_string(k) + " has an empty set");
        if (S.alpha(k) > 4096) throw DomainError("period too large to verify");
    }
    StructureReport rep;
    rep.epsilon = eps;
    const Subdendrite base = S.base.empty() ? whole(X) : S.base;
    for (std::size_t k = 0; k < S.levels.size(); ++k) {
        LevelReport lr;
        const std::int64_t alpha = S.alpha(k);
        lr.alpha = alpha;
        const auto slots = iterate_images(f, S.levels[k].D, alpha + 1);
        const Subdendrite& D = slots[0];

        const double e1 = excess(X, slots[alpha], D);
        lr.conditions[0] = judge(e1 <= eps, e1, "f^alpha(D) overshoot " + std::to_string(e1));

        double min_gap = kInf;
        std::pair<std::int64_t, std::int64_t> worst{0, 0};
        for (std::int64_t i = 0; i < alpha; ++i) {
            for (std::int64_t j = i + 1; j < alpha; ++j) {
                const double g = gap(X, slots[i], slots[j]);
                if (g < min_gap) {
                    min_gap = g;
                    worst = {i, j};
                }
            }
        }
        lr.conditions[1] = judge(min_gap > eps, min_gap,
                                 "min gap " + std::to_string(min_gap) + " between slots " + std::to_string(worst.first) +
                                     "," + std::to_string(worst.second));

        double cover = 0.0;
        std::vector<std::vector<DPoint>> lslots(alpha);
        for (const DPoint& l : L) {
            double best = kInf;
            for (std::int64_t i = 0; i < alpha; ++i) {
                const double d = distance_to(X, slots[i], l);
                best = std::min(best, d);
                if (d <= eps) lslots[i].push_back(l);
            }
            cover = std::max(cover, best);
        }
        lr.conditions[2] = judge(cover <= eps, cover, "farthest sample point " + std::to_string(cover));

        const Subdendrite& prev = k == 0 ? base : S.levels[k - 1].D;
        const std::int64_t prev_alpha = k == 0 ? 1 : S.alpha(k - 1);
        double nest = 0.0;
        for (int m = 0; m < S.levels[k].n; ++m) nest = std::max(nest, excess(X, slots[m * prev_alpha], prev));
        lr.conditions[3] = judge(nest <= eps, nest, "nesting overshoot " + std::to_string(nest));

        double shift = 0.0;
        std::string bad;
        for (std::int64_t i = 0; i < alpha; ++i) {
            std::vector<DPoint> img;
            for (const DPoint& l : lslots[i]) img.push_back(f(l));
            std::int64_t best_j = -1;
            double best_h = kInf;
            for (std::int64_t j = 0; j < alpha; ++j) {
                const double h = hausdorff(X, img, lslots[j]);
                if (h < best_h) {
                    best_h = h;
                    best_j = j;
                }
            }
            shift = std::max(shift, best_h);
            if (best_j != (i + 1) % alpha || best_h > eps) {
                bad += "slot " + std::to_string(i) + "->" + std::to_string(best_j) + "; ";
            }
        }
        lr.conditions[4] = judge(bad.empty(), shift, bad.empty() ? "cyclic" : bad);
        rep.levels.push_back(std::move(lr));
    }
    return rep;
}

ComplementReport analyze_fixed_point_complement(const DendriteMap& f, const DPoint& a, const std::vector<DPoint>& L,
                                                int depth, double eps) {
    const Dendrite& X = f.domain();
    X.check(a);
    if (!X.same_point(f(a), a)) throw DomainError("point " + to_string(a) + " is not fixed");
    if (depth < 0) throw DomainError("depth must be >= 0");
    if (L.empty()) throw DomainError("empty sample");
    ComplementReport rep;
    const auto F = preimages(f, a, depth).points;
    rep.preimage_count = F.size();
    rep.Y = convex_hull(X, F);
    rep.M = convex_hull(X, L);
    for (const Component& c : components_minus(X, rep.Y, &rep.M)) {
        std::vector<DPoint> slot;
        for (const DPoint& l : L) {
            if (distance_to(X, rep.Y, l) > kPointTol && contains(X, c.closure, l)) slot.push_back(l);
        }
        if (!slot.empty()) rep.slots.push_back(std::move(slot));
    }
    const std::size_t n = rep.slots.size();
    rep.sigma.assign(n, -1);
    rep.mismatch.assign(n, kInf);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<DPoint> img;
        for (const DPoint& l : rep.slots[k]) img.push_back(f(l));
        for (std::size_t j = 0; j < n; ++j) {
            const double h = hausdorff(X, img, rep.slots[j]);
            if (h < rep.mismatch[k]) {
                rep.mismatch[k] = h;
                rep.sigma[k] = static_cast<int>(j);
            }
        }
    }
    rep.images_match = std::all_of(rep.mismatch.begin(), rep.mismatch.end(), [&](double h) { return h <= eps; });
    if (n > 1) {
        std::vector<int> hits(n, 0);
        for (int s : rep.sigma) {
            if (s >= 0) ++hits[s];
        }
        const bool perm = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
        if (perm) {
            std::size_t len = 0;
            int k = 0;
            do {
                k = rep.sigma[k];
                ++len;
            } while (k != 0 && len <= n);
            rep.single_cycle = len == n;
        }
    }
    return rep;
}

BoundReport bound_experiment(const DendriteMap& f, const DPoint& x, const CellLocator& cells, int cell,
                             const PeriodicStructure& S, std::size_t level, const SieveTable& table, std::int64_t N,
                             const BoundOptions& opt) {
    const Dendrite& X = f.domain();
    if (&X != &cells.domain()) throw DomainError("cells and map live on different dendrites");
    if (cell < 0 || cell >= static_cast<int>(cells.cells().size())) throw DomainError("no cell " + std::to_string(cell));
    if (N < 1 || N > table.bound()) throw DomainError("bound experiment: N outside the sieve range");
    if (N > std::numeric_limits<int>::max() - 1) throw DomainError("bound experiment: N too large");
    BoundReport rep;
    rep.alpha = S.alpha(level);
    rep.bound = 2.0 / static_cast<double>(rep.alpha);
    rep.checkpoints = normalize_checkpoints(opt.checkpoints, N);
    const auto slots = iterate_images(f, S.levels[level].D, rep.alpha);
    const auto orb = tracked_orbit(f, x, static_cast<int>(std::max(N, opt.horizon)));

    auto interior = [&](std::int64_t i, const DPoint& p) {
        if (!contains(X, slots[i], p)) return false;
        for (const DPoint& q : frontier(X, slots[i])) {
            if (X.distance(p, q) <= kPointTol) return false;
        }
        return true;
    };
    for (std::int64_t n = 1; n <= opt.horizon && rep.n0 == 0; ++n) {
        for (std::int64_t i = 0; i < rep.alpha; ++i) {
            if (interior(i, orb[static_cast<std::size_t>(n)])) {
                rep.n0 = n;
                rep.first_slot = static_cast<int>(i);
                break;
            }
        }
    }
    if (rep.n0 == 0) {
        throw DiagnosticError("orbit never enters a slot interior within horizon " + std::to_string(opt.horizon));
    }

    const Cell& c = cells.cells()[cell];
    rep.slots.resize(rep.alpha);
    for (std::int64_t j = 0; j < rep.alpha; ++j) {
        rep.slots[j].slot = static_cast<int>(j);
        for (const DPoint& b : c.boundary) {
            if (distance_to(X, slots[j], b) <= opt.eps) rep.slots[j].boundary_type = true;
        }
        if (rep.slots[j].boundary_type) ++rep.boundary_slots;
    }

    std::vector<CompensatedSum> A(rep.alpha);
    std::vector<std::int64_t> last(rep.alpha, 0);
    CompensatedSum prefix, total;
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
        const DPoint& p = orb[static_cast<std::size_t>(n)];
        const double psi = cells.psi(cell, p);
        const int m = table.mu(n);
        if (n < rep.n0) {
            if (m != 0 && psi != 0.0) prefix.add(m * psi);
        } else {
            const std::int64_t j = (rep.first_slot + n - rep.n0) % rep.alpha;
            if (!contains(X, slots[j], p, opt.eps)) ++rep.slot_mismatches;
            if (psi != 0.0) {
                SlotReport& s = rep.slots[j];
                if (last[j] != 0) {
                    const std::int64_t g = n - last[j];
                    s.min_gap = s.min_gap == 0 ? g : std::min(s.min_gap, g);
                    if (g < rep.alpha) rep.gaps_ok = false;
                }
                last[j] = n;
                ++s.nonzero_terms;
                if (m != 0) A[j].add(m * psi);
            }
        }
        if (m != 0 && psi != 0.0) total.add(m * psi);
        if (n == rep.checkpoints[next]) {
            const double inv = 1.0 / static_cast<double>(n);
            double split = prefix.value() * inv;
            rep.prefix.push_back(prefix.value() * inv);
            rep.S.push_back(total.value() * inv);
            for (std::int64_t j = 0; j < rep.alpha; ++j) {
                rep.slots[j].series.push_back(A[j].value() * inv);
                split += A[j].value() * inv;
            }
            rep.splitting_residual = std::max(rep.splitting_residual, std::abs(rep.S.back() - split));
            ++next;
            if (next == rep.checkpoints.size()) break;
        }
    }
    for (auto& s : rep.slots) {
        s.A = s.series.back();
        rep.sum_abs += std::abs(s.A);
    }
    return rep;
}

} // namespace dendro
