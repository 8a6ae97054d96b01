#pragma once

#include <vector>

#include "mmheat/grid.hpp"

namespace mmheat {

// Per-cell signed distance from the continuum boundary: positive inside,
// negative outside, zero only within O(h) of the boundary.
struct SignedDistanceField {
    const WeightedGrid* grid = nullptr;
    std::vector<double> delta; // indexed like grid->cells
};

// Exact continuum signed distance (see domain.hpp); re-exported here so the
// field code and its callers share one spelling.
inline double signed_distance_exact_at(const DomainSpec& spec, const Vec2& p) {
    return signed_distance_exact(spec, p);
}

// First-order upwind eikonal marching from boundary-adjacent cells, which are
// seeded with their exact continuum distance. Inside and outside cells are
// marched separately; outside values carry a negative sign.
SignedDistanceField signed_distance_field(const WeightedGrid& grid);

// Field sampled from the exact formula at every cell center.
SignedDistanceField exact_distance_field(const WeightedGrid& grid);

// Max over interior cells (delta > 2h, at least `ridge_buffer` away from the
// ridge set) of | |upwind gradient| - 1 |. The ridge set is detected as cells
// whose exact distance is achieved in two well-separated boundary directions;
// for stock shapes we use the analytic ridge when available.
double eikonal_defect(const SignedDistanceField& field);

} // namespace mmheat
