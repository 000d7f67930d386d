#pragma once

#include "dendro/disjointness.hpp"
#include "dendro/dynamics.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dendro {

// Binary one-sided subshift given by forbidden words or by a constant-length-2
// substitution (whose language is the factor set of its fixed point).
struct SubshiftSpec {
    enum class Kind { full, forbidden, substitution };
    Kind kind = Kind::full;
    std::vector<std::string> forbidden;
    std::array<std::string, 2> rule; // images of '0' and '1'
    std::string name = "full";
};

// "full", "thue-morse", "period-doubling", "forbid:<w>,<w>,..." or
// "subst:<image of 0>,<image of 1>".
SubshiftSpec parse_subshift(const std::string& text);
SubshiftSpec substitution_spec(const std::string& image0, const std::string& image1, std::string name = "");

// Prefix of the substitution fixed point (starting from the letter whose image
// begins with it, or from 0 under the squared substitution).
std::string fixed_point_prefix(const SubshiftSpec& spec, std::size_t length);
// Prefix length used for factor extraction at word length n.
std::size_t factor_prefix_length(int n);

// Sorted admissible words of length n; throws DomainError when empty.
std::vector<std::string> admissible_words(const SubshiftSpec& spec, int n);

// Prefix tree of the admissible words of length <= n: a stem edge of length
// 1/2 from the base vertex to the root, and an edge of length 2^-|w| into
// each nonempty word w. Chains of single-child words are merged into one edge
// and those words become interior points of it.
class GehmanApprox {
public:
    GehmanApprox(SubshiftSpec spec, int depth);

    int depth() const { return depth_; }
    const SubshiftSpec& spec() const { return spec_; }
    const Dendrite& dendrite() const { return *X_; }
    std::shared_ptr<const Dendrite> dendrite_ptr() const { return X_; }
    int stem_base() const { return 0; }
    int root() const { return 1; }

    // Admissible words of length k (k = 0 gives the empty word).
    const std::vector<std::string>& words(int k) const { return levels_.at(k); }
    const std::vector<std::string>& leaves() const { return levels_.back(); }
    bool has_word(const std::string& w) const { return points_.count(w) > 0; }
    DPoint point_of(const std::string& w) const;
    // Exact lookup; nullopt for points that are not word addresses.
    std::optional<std::string> address_of(const DPoint& p) const;
    // Words placed in the interior of edge e, with their coordinates.
    const std::vector<std::pair<double, std::string>>& chain_words(int e) const { return chains_[e]; }

private:
    SubshiftSpec spec_;
    int depth_;
    std::shared_ptr<const Dendrite> X_;
    std::vector<std::vector<std::string>> levels_;
    std::map<std::string, DPoint> points_;
    std::vector<std::string> vertex_words_; // "" for the root, "^" for the stem base
    std::vector<std::vector<std::pair<double, std::string>>> chains_;
};

inline GehmanApprox build_gehman(const SubshiftSpec& spec, int depth) { return GehmanApprox(spec, depth); }

// u -> u with its first symbol dropped; the root and the stem go to the root.
DendriteMap shift_map(const GehmanApprox& G);

struct ConjugacyReport {
    std::int64_t checks = 0;
    std::int64_t failures = 0;
    std::string witness;            // first failing word
    bool image_covers_level = false; // leaf images are exactly the words of length n-1
    bool pass() const { return failures == 0; }
};

// Exhaustive check of address(f(point(u))) == sigma(u) over all admissible
// words with 1 <= |u| <= n.
ConjugacyReport verify_conjugacy(const GehmanApprox& G, const DendriteMap& f);

struct MapEntropyParams {
    int depth = 12;
    double eps = 0.3;
    int n_max = 8;
    double grid_density = 4.0;
};

struct EntropyComparison {
    std::vector<std::int64_t> complexity; // p(1..n_max)
    double complexity_rate = 0.0;         // log p(n_max) / n_max
    double complexity_slope = 0.0;        // tail slope of log p(n)
    EntropyEstimate map_side;
    double gap = 0.0;                     // |complexity_slope - map estimate|
};

EntropyComparison entropy_compare(const SubshiftSpec& spec, int n_max, const MapEntropyParams& params = {});

// Candidate nested structure from the block structure of a constant-length-2
// substitution: level j is the hull of the leaves whose occurrences in the
// fixed point all start at positions = 0 mod 2^j. Throws DiagnosticError when
// a leaf occurs at more than one phase.
PeriodicStructure dyadic_structure(const GehmanApprox& G, int k);

} // namespace dendro
