#pragma once

#include "dendro/subdendrite.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dendro {

// A cell is an open connected subset of X; `body` stores its closure and
// `boundary` the points of the closure that are not in the open cell.
struct Cell {
    Subdendrite body;
    std::vector<DPoint> boundary;
    double diameter = 0.0;
};

// Cut every edge into equal pieces shorter than delta and keep refining the
// longest piece of any component whose diameter is still >= delta. All cut
// points are interior edge points (order 2).
std::vector<Cell> coarse_decompose(const Dendrite& X, double delta);

// Split a coarse cell into cells with at most two boundary points: the hull T
// of the boundary is cut at its branch points, and every component of V - T
// joins the arc it hangs from. A component hanging from a branch point of T
// becomes a cell of its own, with that branch point as its only boundary.
std::vector<Cell> refine_cell(const Dendrite& X, const Cell& V);

struct DecompositionCheck {
    bool cover = true;
    bool diameter = true;
    bool overlap = true;  // distinct closures share at most one point
    bool boundary = true; // at most two boundary points per cell
    bool unity = true;    // step functions sum to 1 on the sample grid
    std::string detail;
    bool ok() const { return cover && diameter && overlap && boundary && unity; }
};

DecompositionCheck verify_decomposition(const Dendrite& X, const std::vector<Cell>& cells, double delta);

struct Decomposition {
    std::vector<Cell> cells;
    // Boundary points whose incident-cell count differs from their order in X.
    int order_deviations = 0;
};

// Coarse then refined decomposition; throws InternalError when the re-check
// of the result fails.
Decomposition decompose(const Dendrite& X, double delta);

// Finds the cells whose closures contain a point. psi_i(x) is 1/m when x lies
// in exactly m closures including cell i, so the psi_i sum to 1 everywhere.
class CellLocator {
public:
    CellLocator(const Dendrite& X, std::vector<Cell> cells);

    const Dendrite& domain() const { return *X_; }
    const std::vector<Cell>& cells() const { return cells_; }
    std::vector<int> containing(const DPoint& x) const;
    double psi(int cell, const DPoint& x) const;

private:
    const Dendrite* X_;
    std::vector<Cell> cells_;
    std::vector<std::vector<int>> by_edge_;
    std::vector<std::vector<int>> by_vertex_;
};

struct StepObservable {
    const CellLocator* locator = nullptr;
    int cell = -1;
    double operator()(const DPoint& x) const { return locator->psi(cell, x); }
};

StepObservable step_function(const CellLocator& cells, int i);

// A real function on X together with a Lipschitz constant for it.
struct Observable {
    std::function<double(const DPoint&)> fn;
    std::string name;
    double lipschitz = 0.0;
};

Observable constant_observable(double c);
Observable distance_observable(const Dendrite& X, const DPoint& base);

// A point of the open cell (midpoint of its longest interval).
DPoint interior_sample(const Dendrite& X, const Cell& c);

struct StepApproximation {
    std::vector<double> coeffs; // c_i = phi(y_i)
    std::vector<DPoint> samples;
    double bound = 0.0;         // Lipschitz constant times the largest cell diameter

    double operator()(const CellLocator& cells, const DPoint& x) const;
};

StepApproximation approximate(const Observable& phi, const CellLocator& cells);

} // namespace dendro
