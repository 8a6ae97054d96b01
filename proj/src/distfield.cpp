#include "mmheat/distfield.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Godunov update: solve (max(u-a,0)/h)^2 + (max(u-b,0)/h)^2 = 1 for the
// smallest consistent u, with a/b the best known values per axis.
double eikonal_update(double a, double b, double h) {
    if (a > b) std::swap(a, b);
    if (b >= kInf || b - a >= h) return a + h;
    const double s = a + b;
    return 0.5 * (s + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
}

// Dijkstra-style fast marching over the given cell set. `axis_nbrs[c]`
// holds up to 4 neighbor cell indices (-1 if absent), x pair then y pair.
void march(const std::vector<std::array<int, 4>>& axis_nbrs,
           const std::vector<int>& cells, std::vector<double>& u, double h) {
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> accepted(u.size(), 0);
    for (int c : cells)
        if (u[static_cast<size_t>(c)] < kInf) heap.push({u[static_cast<size_t>(c)], c});
    while (!heap.empty()) {
        const auto [val, c] = heap.top();
        heap.pop();
        if (accepted[static_cast<size_t>(c)]) continue;
        if (val > u[static_cast<size_t>(c)]) continue;
        accepted[static_cast<size_t>(c)] = 1;
        for (int nb : axis_nbrs[static_cast<size_t>(c)]) {
            if (nb < 0 || accepted[static_cast<size_t>(nb)]) continue;
            const auto& nn = axis_nbrs[static_cast<size_t>(nb)];
            double ax = kInf, ay = kInf;
            for (int k = 0; k < 2; ++k)
                if (nn[k] >= 0) ax = std::min(ax, u[static_cast<size_t>(nn[k])]);
            for (int k = 2; k < 4; ++k)
                if (nn[k] >= 0) ay = std::min(ay, u[static_cast<size_t>(nn[k])]);
            const double cand = eikonal_update(ax, ay, h);
            if (cand < u[static_cast<size_t>(nb)]) {
                u[static_cast<size_t>(nb)] = cand;
                heap.push({cand, nb});
            }
        }
    }
}

} // namespace

SignedDistanceField signed_distance_field(const WeightedGrid& grid) {
    SignedDistanceField f;
    f.grid = &grid;
    f.delta.assign(grid.cells.size(), kInf);
    const size_t n = grid.cells.size();

    // Inside pass: adjacency follows grid edges, so slit cuts block marching.
    std::vector<std::array<int, 4>> nbrs(n, {-1, -1, -1, -1});
    for (const GridEdge& e : grid.edges) {
        // Edges are recorded in the +x / +y direction from cell_a.
        const GridCell& a = grid.cells[static_cast<size_t>(e.cell_a)];
        const GridCell& b = grid.cells[static_cast<size_t>(e.cell_b)];
        const int axis = a.ix != b.ix ? 0 : 2;
        nbrs[static_cast<size_t>(e.cell_a)][axis] = e.cell_b;
        nbrs[static_cast<size_t>(e.cell_b)][axis + 1] = e.cell_a;
    }
    std::vector<double> din(n, kInf);
    // Boundary-adjacent cells are seeded with their exact continuum distance
    // (not zero): this removes the O(h) bias the profiles would inherit.
    for (const BoundaryLink& bl : grid.boundary)
        din[static_cast<size_t>(bl.cell)] =
            boundary_distance(grid.domain, grid.cells[static_cast<size_t>(bl.cell)].center);
    march(nbrs, grid.inside_cells, din, grid.h);

    // Outside pass on the complement cells of the stored box.
    std::vector<std::array<int, 4>> onbrs(n, {-1, -1, -1, -1});
    std::vector<int> outside;
    std::vector<double> dout(n, kInf);
    for (size_t c = 0; c < n; ++c) {
        const GridCell& cell = grid.cells[c];
        if (cell.inside) continue;
        outside.push_back(static_cast<int>(c));
        const std::int64_t dx[4] = {1, -1, 0, 0};
        const std::int64_t dy[4] = {0, 0, 1, -1};
        for (int dir = 0; dir < 4; ++dir) {
            const int nb = grid.cell_at(cell.ix + dx[dir], cell.iy + dy[dir]);
            if (nb >= 0 && !grid.cells[static_cast<size_t>(nb)].inside)
                onbrs[c][dir] = nb;
        }
        const double d = boundary_distance(grid.domain, cell.center);
        if (d <= 2.0 * grid.h) dout[c] = d;
    }
    march(onbrs, outside, dout, grid.h);

    for (size_t c = 0; c < n; ++c)
        f.delta[c] = grid.cells[c].inside ? din[c] : -dout[c];
    return f;
}

SignedDistanceField exact_distance_field(const WeightedGrid& grid) {
    SignedDistanceField f;
    f.grid = &grid;
    f.delta.resize(grid.cells.size());
    for (size_t c = 0; c < grid.cells.size(); ++c)
        f.delta[c] = signed_distance_exact(grid.domain, grid.cells[c].center);
    return f;
}

double eikonal_defect(const SignedDistanceField& field) {
    const WeightedGrid& g = *field.grid;
    const double h = g.h;
    double max_delta = 0.0;
    for (int c : g.inside_cells)
        max_delta = std::max(max_delta, field.delta[static_cast<size_t>(c)]);
    // Cut-locus exclusion zone. A fixed 2h buffer would leave an O(1)
    // curvature defect next to the ridge; a buffer ~ sqrt(h) vanishes with
    // refinement while still covering the ridge only on a null set in the
    // limit, which is what the a.e. statement asks for.
    const double buffer = std::max(2.0 * h, 2.0 * std::sqrt(h * std::max(max_delta, h)));

    double defect = 0.0;
    for (int c : g.inside_cells) {
        const GridCell& cell = g.cells[static_cast<size_t>(c)];
        const double d = field.delta[static_cast<size_t>(c)];
        if (!(d > 2.0 * h)) continue;
        // Off-ridge test: stepping away from the boundary foot by `buffer`
        // must increase the exact distance by the full step.
        const double step = 1e-6;
        const Vec2 gx{signed_distance_exact(g.domain, cell.center + Vec2{step, 0.0}) -
                          signed_distance_exact(g.domain, cell.center - Vec2{step, 0.0}),
                      g.dim == 1
                          ? 0.0
                          : signed_distance_exact(g.domain, cell.center + Vec2{0.0, step}) -
                                signed_distance_exact(g.domain, cell.center - Vec2{0.0, step})};
        if (gx.norm() == 0.0) continue;
        const Vec2 nrm = gx.normalized();
        const double de = signed_distance_exact(g.domain, cell.center);
        if (signed_distance_exact(g.domain, cell.center + nrm * buffer) <
            de + buffer - 1e-6 * buffer)
            continue; // within `buffer` of the cut locus

        double dx2 = 0.0;
        const std::int64_t ddx[4] = {1, -1, 0, 0};
        const std::int64_t ddy[4] = {0, 0, 1, -1};
        for (int axis = 0; axis < (g.dim == 1 ? 1 : 2); ++axis) {
            double best = 0.0;
            for (int k = 0; k < 2; ++k) {
                const int dir = axis * 2 + k;
                const int nb = g.cell_at(cell.ix + ddx[dir], cell.iy + ddy[dir]);
                if (nb < 0 || !g.cells[static_cast<size_t>(nb)].inside) continue;
                if (slit_crosses(g.domain, cell.center,
                                 g.cells[static_cast<size_t>(nb)].center))
                    continue;
                best = std::max(best, (d - field.delta[static_cast<size_t>(nb)]) / h);
            }
            dx2 += best * best;
        }
        defect = std::max(defect, std::abs(std::sqrt(dx2) - 1.0));
    }
    return defect;
}

} // namespace mmheat
