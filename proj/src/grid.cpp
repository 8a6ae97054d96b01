#include "mmheat/grid.hpp"

#include <cmath>
#include <queue>

#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

// Locate the boundary crossing on the segment from an inside point p along
// direction d (|d| = h): returns the distance from p, in (0, h].
double crossing_distance(const DomainSpec& spec, const Vec2& p, const Vec2& d) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (contains(spec, p + d * mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi) * d.norm();
}

// Crossing parameter of segment [p, p+d] with slit [a, b], or -1.
double slit_crossing_param(const Vec2& p, const Vec2& d, const Vec2& a, const Vec2& b) {
    const Vec2 s = b - a;
    const double denom = d.cross(s);
    if (std::abs(denom) < 1e-300) return -1.0;
    const double t = (a - p).cross(s) / denom;
    const double u = (a - p).cross(d) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return t;
    return -1.0;
}

double slit_cut_distance(const DomainSpec& spec, const Vec2& p, const Vec2& d) {
    double best = -1.0;
    if (const auto* df = std::get_if<Difference>(&spec.shape)) {
        for (const auto& sl : df->slits) {
            const double t = slit_crossing_param(p, d, sl.a, sl.b);
            if (t >= 0.0 && (best < 0.0 || t < best)) best = t;
        }
    }
    return best < 0.0 ? -1.0 : best * d.norm();
}

} // namespace

WeightedGrid discretize(const DomainSpec& spec, double h) {
    validate(spec);
    if (!(h > 0.0)) throw ConfigError("h must be positive");
    const double feature = min_feature_size(spec);
    if (!(h <= feature / 4.0))
        throw FeatureTooFine("h = " + std::to_string(h) +
                             " too coarse for feature size " + std::to_string(feature));

    WeightedGrid g;
    g.h = h;
    g.dim = is_interval(spec) ? 1 : 2;
    g.domain = spec;

    const BBox bb = bounding_box(spec);
    g.ix0 = static_cast<std::int64_t>(std::floor(bb.lo.x / h)) - 2;
    const std::int64_t ix1 = static_cast<std::int64_t>(std::ceil(bb.hi.x / h)) + 2;
    g.nx = ix1 - g.ix0;
    if (g.dim == 1) {
        g.iy0 = 0;
        g.ny = 1;
    } else {
        g.iy0 = static_cast<std::int64_t>(std::floor(bb.lo.y / h)) - 2;
        const std::int64_t iy1 = static_cast<std::int64_t>(std::ceil(bb.hi.y / h)) + 2;
        g.ny = iy1 - g.iy0;
    }

    const double cell_measure = g.dim == 1 ? h : h * h;
    g.cells.resize(static_cast<size_t>(g.nx * g.ny));
    g.inside_index.assign(g.cells.size(), -1);
    for (std::int64_t iy = g.iy0; iy < g.iy0 + g.ny; ++iy) {
        for (std::int64_t ix = g.ix0; ix < g.ix0 + g.nx; ++ix) {
            const int c = g.cell_at(ix, iy);
            GridCell& cell = g.cells[static_cast<size_t>(c)];
            cell.ix = ix;
            cell.iy = iy;
            cell.center = {(ix + 0.5) * h, g.dim == 1 ? 0.0 : (iy + 0.5) * h};
            cell.measure = cell_measure;
            cell.inside = contains(spec, cell.center);
            if (cell.inside) {
                g.inside_index[static_cast<size_t>(c)] =
                    static_cast<int>(g.inside_cells.size());
                g.inside_cells.push_back(c);
            }
        }
    }

    // 5-point stencil (3-point in 1D). Each lattice edge of an inside cell is
    // either an inside-inside conductance, or a Dirichlet link where the
    // continuum boundary (or a slit) crosses it.
    const double edge_cond = g.dim == 1 ? 1.0 / h : 1.0;
    const int ndir = g.dim == 1 ? 2 : 4;
    const std::int64_t dx[4] = {1, -1, 0, 0};
    const std::int64_t dy[4] = {0, 0, 1, -1};
    for (int c : g.inside_cells) {
        const GridCell& cell = g.cells[static_cast<size_t>(c)];
        for (int dir = 0; dir < ndir; ++dir) {
            const int nb = g.cell_at(cell.ix + dx[dir], cell.iy + dy[dir]);
            const Vec2 step{dx[dir] * h, dy[dir] * h};
            const bool nb_inside = nb >= 0 && g.cells[static_cast<size_t>(nb)].inside;
            const double cut = slit_cut_distance(spec, cell.center, step);
            if (nb_inside && cut < 0.0) {
                if (dir == 0 || dir == 2) // record each edge once
                    g.edges.push_back({c, nb, edge_cond});
            } else {
                double a = cut >= 0.0 ? cut : crossing_distance(spec, cell.center, step);
                a = std::max(a, 0.05 * h); // guard against near-boundary centers
                g.boundary.push_back({c, dir, a, cell_measure / (h * a)});
            }
        }
    }

    // Connectivity over inside cells.
    if (!g.inside_cells.empty()) {
        std::vector<std::vector<int>> adj(g.n_inside());
        for (const GridEdge& e : g.edges) {
            const int a = g.inside_index[static_cast<size_t>(e.cell_a)];
            const int b = g.inside_index[static_cast<size_t>(e.cell_b)];
            adj[static_cast<size_t>(a)].push_back(b);
            adj[static_cast<size_t>(b)].push_back(a);
        }
        std::vector<char> seen(g.n_inside(), 0);
        std::queue<int> bfs;
        bfs.push(0);
        seen[0] = 1;
        size_t reached = 1;
        while (!bfs.empty()) {
            const int v = bfs.front();
            bfs.pop();
            for (int w : adj[static_cast<size_t>(v)]) {
                if (!seen[static_cast<size_t>(w)]) {
                    seen[static_cast<size_t>(w)] = 1;
                    ++reached;
                    bfs.push(w);
                }
            }
        }
        if (reached != g.n_inside())
            throw DisconnectedDomain("inside cells form " +
                                     std::to_string(g.n_inside() - reached + 1) +
                                     "+ components");
    }
    return g;
}

WeightedGrid make_collar_grid(const DomainSpec& spec, double h, double width) {
    const BBox bb = bounding_box(spec);
    DomainSpec box = make_rect({bb.lo.x - width, bb.lo.y - width},
                               bb.hi.x - bb.lo.x + 2.0 * width,
                               bb.hi.y - bb.lo.y + 2.0 * width);
    if (is_interval(spec))
        box = make_interval(bb.lo.x - width, bb.hi.x + width);
    box.label = spec.label + "_collar";
    return discretize(box, h);
}

} // namespace mmheat
