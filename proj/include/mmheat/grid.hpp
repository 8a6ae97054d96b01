#pragma once

#include <cstdint>
#include <vector>

#include "mmheat/domain.hpp"

namespace mmheat {

// Cells live on the global lattice with centers ((i+1/2)h, (j+1/2)h), so two
// grids with the same spacing are automatically aligned. A cell is inside iff
// its center lies in the open continuum domain (exact tie handling via the
// half-open center-in test).
struct GridCell {
    std::int64_t ix = 0; // lattice index, center x = (ix + 0.5) * h
    std::int64_t iy = 0;
    Vec2 center;
    double measure = 0.0; // h^2 in 2D, h in 1D
    bool inside = false;
};

struct GridEdge {
    int cell_a = -1; // indices into cells; both inside
    int cell_b = -1;
    double conductance = 0.0; // measure/length^2; 1 in 2D, 1/h in 1D
};

// Flux link from an inside cell to the Dirichlet boundary: the continuum
// boundary crosses the lattice edge at distance `a` from the cell center.
// Used for the eliminated-boundary Laplacian and for distance seeding.
struct BoundaryLink {
    int cell = -1;
    int dir = 0; // 0:+x 1:-x 2:+y 3:-y
    double a = 0.0;
    double conductance = 0.0; // measure / (h * a)
};

struct WeightedGrid {
    double h = 0.0;
    int dim = 2;
    std::vector<GridCell> cells; // all lattice cells of the padded bbox
    std::vector<GridEdge> edges; // inside-inside 5-point stencil
    std::vector<BoundaryLink> boundary;
    std::vector<int> inside_cells;     // indices into cells
    std::vector<int> inside_index;     // cells index -> dense inside index, -1 outside
    std::int64_t ix0 = 0, iy0 = 0;     // lattice range covered by `cells`
    std::int64_t nx = 0, ny = 0;
    DomainSpec domain;

    int cell_at(std::int64_t ix, std::int64_t iy) const {
        if (ix < ix0 || ix >= ix0 + nx || iy < iy0 || iy >= iy0 + ny) return -1;
        return static_cast<int>((iy - iy0) * nx + (ix - ix0));
    }
    size_t n_inside() const { return inside_cells.size(); }
    double inside_measure() const {
        double m = 0.0;
        for (int c : inside_cells) m += cells[c].measure;
        return m;
    }
};

// Center-in-domain discretization on the global lattice.
// Throws FeatureTooFine if h >= min_feature_size/8 and DisconnectedDomain if
// the inside cells do not form a single connected component.
WeightedGrid discretize(const DomainSpec& spec, double h);

// Plain box grid covering the domain inflated by `width` on every side; all
// cells are inside, the far edge is Dirichlet-eliminated. The whole-space
// stand-in for the global heat flow.
WeightedGrid make_collar_grid(const DomainSpec& spec, double h, double width);

} // namespace mmheat
