#pragma once

#include "dendro/dendrite.hpp"
#include "dendro/subdendrite.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace dendro {

// Extra breakpoint on an edge with its own declared image.
struct Subdivision {
    int edge = -1;
    double t = 0.0;
    DPoint image;
};

// Piecewise-linear self-map of a finite dendrite. Each (sub)edge [a, b] is
// sent onto the arc [f(a), f(b)] at constant speed, which is the unique
// continuous extension of the vertex data. Immutable once built.
class DendriteMap {
public:
    DendriteMap(std::shared_ptr<const Dendrite> X, std::vector<DPoint> vertex_images,
                std::vector<Subdivision> subdivisions = {});

    const Dendrite& domain() const { return *X_; }
    std::shared_ptr<const Dendrite> domain_ptr() const { return X_; }

    DPoint operator()(const DPoint& p) const;
    const DPoint& vertex_image(int v) const { return vertex_images_[v]; }
    const std::vector<DPoint>& vertex_images() const { return vertex_images_; }
    // Breakpoints of edge e, from 0 to 1 inclusive.
    const std::vector<double>& breakpoints(int e) const { return edges_[e].ts; }
    // Image of breakpoint k of edge e.
    const DPoint& breakpoint_image(int e, int k) const { return edges_[e].images[k]; }
    // Image arc of segment k of edge e (between breakpoints k and k+1).
    const ArcPath& segment_arc(int e, int k) const { return edges_[e].arcs[k]; }
    int segment_count(int e) const { return static_cast<int>(edges_[e].arcs.size()); }
    std::vector<Subdivision> subdivisions() const;

private:
    struct EdgeData {
        std::vector<double> ts;
        std::vector<DPoint> images;
        std::vector<ArcPath> arcs;
    };

    std::shared_ptr<const Dendrite> X_;
    std::vector<DPoint> vertex_images_;
    std::vector<EdgeData> edges_;
};

DendriteMap identity_map(std::shared_ptr<const Dendrite> X);
// g o f, represented exactly (f is monotone along each image arc, so each
// piece of f lands inside one segment of g).
DendriteMap compose(const DendriteMap& g, const DendriteMap& f);
DendriteMap iterate(const DendriteMap& f, int k);

// Image f(D) of a connected set: the hull of the images of D's nodes and of
// the breakpoints of f inside D.
Subdendrite image(const DendriteMap& f, const Subdendrite& D);

// [x, f(x), ..., f^N(x)] by plain iteration.
std::vector<DPoint> orbit(const DendriteMap& f, const DPoint& x, int N);

struct OmegaOptions {
    int burn_in = 1000;
    int samples = 10000;
    double resolution = 1e-3;
};

struct OmegaApprox {
    std::vector<DPoint> points;
    OmegaOptions options;
    bool finite_cycle = false;
    int period = 0;     // cycle length when finite_cycle
    int preperiod = 0;  // first orbit index on the cycle
};

// Orbit with repeat detection: once f^n(x) comes back within kPointTol of an
// earlier orbit point the orbit is continued periodically instead of by
// further (error-amplifying) iteration.
std::vector<DPoint> tracked_orbit(const DendriteMap& f, const DPoint& x, int N, int* period = nullptr,
                                  int* preperiod = nullptr);

OmegaApprox omega_limit(const DendriteMap& f, const DPoint& x, const OmegaOptions& opt = {});

struct FixedPointSet {
    std::vector<DPoint> points;
    bool has_continuum = false; // some segment is fixed pointwise
    bool entire_space = false;  // f is the identity on all of X
};

FixedPointSet fixed_points(const DendriteMap& f, double tol = 1e-9);

struct PeriodicPoint {
    DPoint point;
    int period = 1;
};

std::vector<PeriodicPoint> periodic_points(const DendriteMap& f, int max_period, double tol = 1e-9);

struct PreimageSet {
    std::vector<DPoint> points;
    bool collapsed = false; // some segment is mapped onto a single target point
};

// All q with f^k(q) = p for some 0 <= k <= depth.
PreimageSet preimages(const DendriteMap& f, const DPoint& p, int depth, double tol = 1e-9);

enum class PairClass { proximal_only, asymptotic, li_yorke_candidate, neither };
std::string to_string(PairClass c);

struct PairEvidence {
    PairClass label = PairClass::neither;
    double min_distance = 0.0;
    int argmin = 0;
    double tail_max = 0.0;
    int tail_start = 0;
    int tail_separations = 0; // tail indices with distance > delta_asym
};

// Finite-horizon evidence only: proximal if some distance up to H drops below
// delta_prox, non-asymptotic if the tail (second half of [0, H]) has
// distances above delta_asym.
PairEvidence classify_pair(const DendriteMap& f, const DPoint& x, const DPoint& y, int horizon,
                           double delta_prox, double delta_asym);

struct EntropyEstimate {
    double estimate = 0.0;
    std::vector<std::int64_t> separated; // separated[n-1] = sep(n, f, eps)
    std::size_t grid_size = 0;
    int tail_from = 0;
};

// Lower-bound entropy estimate from greedy (n, f, eps)-separated subsets of a
// grid with spacing eps / grid_density; the estimate is the least-squares
// slope of log sep(n) over the last half of 1..n_max.
EntropyEstimate entropy_estimate(const DendriteMap& f, double eps, int n_max, double grid_density = 4.0);

// Slope of log(values) against n = first..first+size-1 by least squares;
// exactly zero for a constant table.
double log_slope(const std::vector<double>& log_values, int first);

} // namespace dendro
