#pragma once

#include "dendro/arith.hpp"
#include "dendro/decomposition.hpp"
#include "dendro/dynamics.hpp"

#include <array>
#include <string>
#include <vector>

namespace dendro {

struct SumSeries {
    std::vector<std::pair<std::int64_t, double>> checkpoints; // (N', S_N')
    std::string observable;
    std::int64_t start = 1;
};

// S_N(x, phi) = (1/N) sum_{n=1}^{N} mu(n) phi(f^n x) at each checkpoint
// (N itself when none are given). One orbit pass serves all observables.
std::vector<SumSeries> sarnak_sums(const DendriteMap& f, const DPoint& x, const std::vector<Observable>& phis,
                                   const SieveTable& table, std::int64_t N,
                                   std::vector<std::int64_t> checkpoints = {});
SumSeries sarnak_sum(const DendriteMap& f, const DPoint& x, const Observable& phi, const SieveTable& table,
                     std::int64_t N, std::vector<std::int64_t> checkpoints = {});

struct StructureLevel {
    Subdendrite D;
    int n = 2;
};

// Nested periodic subdendrites: level k has period alpha_k = n_1 ... n_k.
// An empty base means the whole dendrite.
struct PeriodicStructure {
    Subdendrite base;
    std::vector<StructureLevel> levels;

    std::int64_t alpha(std::size_t k) const; // alpha of levels[k]
};

struct ConditionResult {
    bool pass = false;
    double margin = 0.0; // distance-type quantity the condition was judged on
    std::string detail;
};

struct LevelReport {
    std::int64_t alpha = 0;
    // 0: f^alpha(D) in D, 1: slots pairwise apart, 2: L covered by slots,
    // 3: nesting in the previous level, 4: f shifts the L-slots cyclically.
    std::array<ConditionResult, 5> conditions;
    bool ok() const;
};

struct StructureReport {
    double epsilon = 0.0;
    std::vector<LevelReport> levels;
    bool ok() const;
};

StructureReport verify_structure(const DendriteMap& f, const PeriodicStructure& S, const std::vector<DPoint>& L,
                                 double eps = 1e-3);

struct ComplementReport {
    std::size_t preimage_count = 0; // |F_a| at the requested depth
    Subdendrite Y;                  // hull of F_a
    Subdendrite M;                  // hull of the L sample
    std::vector<std::vector<DPoint>> slots; // L points per component of M - Y
    std::vector<int> sigma;         // slot permutation, -1 where no slot matches
    std::vector<double> mismatch;   // Hausdorff distance of f(l_k) to l_sigma(k)
    bool single_cycle = false;      // sigma is one cycle of length > 1
    bool images_match = false;      // every mismatch <= eps
};

ComplementReport analyze_fixed_point_complement(const DendriteMap& f, const DPoint& a, const std::vector<DPoint>& L,
                                                int depth, double eps = 1e-3);

struct SlotReport {
    int slot = 0;
    bool boundary_type = false; // the cell boundary meets this slot
    double A = 0.0;             // A_N^j at the final N
    std::vector<double> series; // A_{N'}^j at the checkpoints
    std::int64_t min_gap = 0;   // smallest index gap between nonzero terms (0 if fewer than two)
    std::int64_t nonzero_terms = 0;
};

struct BoundOptions {
    std::int64_t horizon = 10000; // scan limit for n_0
    double eps = 1e-3;            // boundary-in-slot tolerance
    std::vector<std::int64_t> checkpoints;
};

struct BoundReport {
    std::int64_t alpha = 0;
    std::int64_t n0 = 0;
    int first_slot = 0;
    std::vector<SlotReport> slots;
    std::vector<std::int64_t> checkpoints;
    std::vector<double> prefix;  // (1/N') sum_{n<n0}, per checkpoint
    std::vector<double> S;       // S_{N'} summed independently, per checkpoint
    double splitting_residual = 0.0; // max |S - prefix - sum_j A^j| over checkpoints
    double sum_abs = 0.0;        // sum_j |A_N^j|
    double bound = 0.0;          // 2 / alpha
    int boundary_slots = 0;
    bool gaps_ok = true;         // nonzero terms of each slot are >= alpha apart
    std::int64_t slot_mismatches = 0; // orbit points outside their predicted slot
};

// Splits S_N(x, psi_cell) along the slots f^j(D) of structure level `level`.
BoundReport bound_experiment(const DendriteMap& f, const DPoint& x, const CellLocator& cells, int cell,
                             const PeriodicStructure& S, std::size_t level, const SieveTable& table, std::int64_t N,
                             const BoundOptions& opt = {});

// f^i(D) for i = 0..count-1, computed exactly.
std::vector<Subdendrite> iterate_images(const DendriteMap& f, const Subdendrite& D, std::int64_t count);

} // namespace dendro
