#include "dendro/dynamics.hpp"

#include "dendro/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

namespace dendro {

double log_slope(const std::vector<double>& log_values, int first) {
    const std::size_t m = log_values.size();
    if (m < 2) return 0.0;
    // Work with deviations from the first entry so a constant table gives 0.
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += static_cast<double>(first) + static_cast<double>(i);
        ybar += log_values[i] - log_values[0];
    }
    xbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = static_cast<double>(first) + static_cast<double>(i) - xbar;
        sxy += dx * ((log_values[i] - log_values[0]) - ybar);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

namespace {

// Candidate lookup for the greedy pass. Points within eps of each other have
// landmark distances within eps, so bucketing three iterates by
// floor(d(., v0) / eps) and probing the 27 neighbouring buckets finds every
// point that might fail to be separated.
class SeparatedSet {
public:
    SeparatedSet(const Dendrite& X, double eps, int n)
        : X_(X), eps_(eps), n_(n), probe_{0, (n - 1) / 2, n - 1} {}

    bool try_add(const std::vector<DPoint>& orb) {
        long long c[3];
        for (int i = 0; i < 3; ++i) c[i] = bucket(orb[probe_[i]]);
        for (int a = -1; a <= 1; ++a) {
            for (int b = -1; b <= 1; ++b) {
                for (int d = -1; d <= 1; ++d) {
                    auto it = buckets_.find(pack(c[0] + a, c[1] + b, c[2] + d));
                    if (it == buckets_.end()) continue;
                    for (int id : it->second) {
                        if (!separated(orb, id)) return false;
                    }
                }
            }
        }
        const int id = static_cast<int>(size_);
        pool_.insert(pool_.end(), orb.begin(), orb.begin() + n_);
        buckets_[pack(c[0], c[1], c[2])].push_back(id);
        ++size_;
        return true;
    }

    std::size_t size() const { return size_; }

private:
    long long bucket(const DPoint& p) const {
        return static_cast<long long>(std::floor(X_.distance(p, DPoint::at_vertex(0)) / eps_));
    }
    static std::uint64_t pack(long long a, long long b, long long c) {
        auto f = [](long long x) { return static_cast<std::uint64_t>(x + 1) & 0x1fffffu; };
        return (f(a) << 42) | (f(b) << 21) | f(c);
    }
    bool separated(const std::vector<DPoint>& orb, int id) const {
        const DPoint* other = pool_.data() + static_cast<std::size_t>(id) * n_;
        // Probe the far iterates first; they separate most pairs.
        for (int j = n_ - 1; j >= 0; --j) {
            if (X_.distance(orb[j], other[j]) > eps_) return true;
        }
        return false;
    }

    const Dendrite& X_;
    double eps_;
    int n_;
    std::array<int, 3> probe_;
    std::size_t size_ = 0;
    std::vector<DPoint> pool_;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

} // namespace

EntropyEstimate entropy_estimate(const DendriteMap& f, double eps, int n_max, double grid_density) {
    if (!(eps > 0.0)) throw DomainError("entropy_estimate needs eps > 0");
    if (n_max < 2) throw DomainError("entropy_estimate needs n_max >= 2");
    if (!(grid_density >= 4.0)) {
        throw ConfigError("grid too coarse: spacing eps/" + std::to_string(grid_density) + " exceeds eps/4");
    }
    const Dendrite& X = f.domain();
    const double spacing = eps / grid_density;
    if (X.total_length() / spacing > 5e7) throw ConfigError("grid too fine: more than 5e7 points");
    if (X.total_length() / eps > 1e6) throw ConfigError("eps too small for the bucket index");

    EntropyEstimate out;
    const auto pts = grid(X, whole(X), spacing);
    out.grid_size = pts.size();
    std::vector<DPoint> orb;
    for (int n = 1; n <= n_max; ++n) {
        SeparatedSet sep(X, eps, n);
        for (const DPoint& p : pts) {
            orb.assign(1, p);
            for (int j = 1; j < n; ++j) orb.push_back(f(orb.back()));
            sep.try_add(orb);
        }
        out.separated.push_back(static_cast<std::int64_t>(sep.size()));
    }
    out.tail_from = n_max - n_max / 2 + 1;
    std::vector<double> logs;
    for (int n = out.tail_from; n <= n_max; ++n) logs.push_back(std::log(static_cast<double>(out.separated[n - 1])));
    out.estimate = std::max(0.0, log_slope(logs, out.tail_from));
    return out;
}

} // namespace dendro
