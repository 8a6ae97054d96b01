#include "mmheat/coarea.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

// Cells sorted by descending delta with suffix sums of a per-cell quantity:
// tail(r) = sum over {delta > r}.
struct SuffixTable {
    std::vector<double> delta;  // descending
    std::vector<double> suffix; // suffix[i] = sum of values[0..i]

    double tail(double r) const {
        // first index with delta <= r
        const auto it = std::lower_bound(delta.begin(), delta.end(), r,
                                         [](double d, double rr) { return d > rr; });
        const auto i = static_cast<size_t>(it - delta.begin());
        return i == 0 ? 0.0 : suffix[i - 1];
    }
};

SuffixTable make_suffix(const WeightedGrid& g, const SignedDistanceField& f,
                        const std::vector<double>& per_inside_values) {
    std::vector<size_t> order(g.n_inside());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return f.delta[static_cast<size_t>(g.inside_cells[a])] >
               f.delta[static_cast<size_t>(g.inside_cells[b])];
    });
    SuffixTable t;
    t.delta.reserve(order.size());
    t.suffix.reserve(order.size());
    double acc = 0.0;
    for (size_t k : order) {
        t.delta.push_back(f.delta[static_cast<size_t>(g.inside_cells[k])]);
        acc += per_inside_values[k];
        t.suffix.push_back(acc);
    }
    return t;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (size_t i = 1; i < x.size(); ++i)
        acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return acc;
}

// Polynomial bump (1 - xi^2)^4 on |xi| < 1 and its second derivative.
double bump(double xi) {
    if (std::abs(xi) >= 1) return 0.0;
    const double u = 1 - xi * xi;
    return u * u * u * u;
}

double bump_dd(double xi) {
    if (std::abs(xi) >= 1) return 0.0;
    const double u = 1 - xi * xi;
    return -8 * u * u * u + 48 * xi * xi * u * u;
}

} // namespace

LevelProfile volume_profile(const SignedDistanceField& field,
                            std::vector<double> radii) {
    const WeightedGrid& g = *field.grid;
    for (size_t j = 1; j < radii.size(); ++j)
        if (!(radii[j] > radii[j - 1]))
            throw ConfigError("level radii must be strictly increasing");
    if (!radii.empty() && radii.front() < 0)
        throw ConfigError("level radii must be nonnegative");
    std::vector<double> measures(g.n_inside());
    for (size_t i = 0; i < g.n_inside(); ++i)
        measures[i] = g.cells[static_cast<size_t>(g.inside_cells[i])].measure;
    const SuffixTable t = make_suffix(g, field, measures);
    LevelProfile p;
    p.radii = std::move(radii);
    p.h = g.h;
    for (double r : p.radii) p.volume.push_back(t.tail(r));
    return p;
}

LevelProfile perimeter_profile(LevelProfile profile) {
    const auto& r = profile.radii;
    const auto& v = profile.volume;
    if (r.size() < 3)
        throw ConfigError("perimeter profile needs at least three radii");
    for (size_t j = 1; j < r.size(); ++j)
        if (r[j] - r[j - 1] < 2 * profile.h - 1e-12)
            throw RadiiTooFine("level spacing below 2h");
    const size_t n = r.size();
    profile.perimeter.assign(n, 0.0);
    for (size_t j = 1; j + 1 < n; ++j)
        profile.perimeter[j] = -(v[j + 1] - v[j - 1]) / (r[j + 1] - r[j - 1]);
    profile.perimeter[n - 1] = -(v[n - 1] - v[n - 2]) / (r[n - 1] - r[n - 2]);
    // Continuity at r = 0: linear extrapolation from the first interior pair.
    profile.perimeter[0] =
        profile.perimeter[1] + (r[0] - r[1]) * (profile.perimeter[2] - profile.perimeter[1]) /
                                   (r[2] - r[1]);
    return profile;
}

double gauss_green_defect(const WeightedGrid& grid,
                          const SignedDistanceField& field,
                          const std::function<Vec2(const Vec2&)>& w, double r,
                          double band_width) {
    const double h = grid.h;
    const auto in_set = [&](int cell) { return field.delta[static_cast<size_t>(cell)] > r; };

    double lhs = 0.0;
    for (const GridEdge& e : grid.edges) {
        const GridCell& ca = grid.cells[static_cast<size_t>(e.cell_a)];
        const GridCell& cb = grid.cells[static_cast<size_t>(e.cell_b)];
        const Vec2 mid = (ca.center + cb.center) * 0.5;
        const Vec2 dir = (cb.center - ca.center) / h; // unit, +x or +y
        const double flux = w(mid).dot(dir) * h;
        if (in_set(e.cell_a)) lhs += flux;
        if (in_set(e.cell_b)) lhs -= flux;
    }
    static const Vec2 dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const BoundaryLink& bl : grid.boundary) {
        if (!in_set(bl.cell)) continue;
        const GridCell& c = grid.cells[static_cast<size_t>(bl.cell)];
        const Vec2 pos = c.center + dirs[bl.dir] * bl.a;
        lhs += w(pos).dot(dirs[bl.dir]) * h;
    }

    // Band estimate of -int <w, grad delta> dPer with grad delta from
    // centered differences of the field; the band straddles the level so the
    // flux average is second-order accurate in the band width.
    std::vector<std::array<int, 4>> nbrs(grid.cells.size(), {-1, -1, -1, -1});
    for (const GridEdge& e : grid.edges) {
        const GridCell& ca = grid.cells[static_cast<size_t>(e.cell_a)];
        const GridCell& cb = grid.cells[static_cast<size_t>(e.cell_b)];
        const int ax = std::abs(cb.ix - ca.ix) == 1 ? 0 : 1;
        nbrs[static_cast<size_t>(e.cell_a)][2 * ax] = e.cell_b;
        nbrs[static_cast<size_t>(e.cell_b)][2 * ax + 1] = e.cell_a;
    }
    double rhs = 0.0;
    for (int c : grid.inside_cells) {
        const double del = field.delta[static_cast<size_t>(c)];
        if (!(del > r - band_width / 2 && del <= r + band_width / 2)) continue;
        Vec2 grad{0, 0};
        for (int ax = 0; ax < 2; ++ax) {
            const int fwd = nbrs[static_cast<size_t>(c)][2 * ax];
            const int bwd = nbrs[static_cast<size_t>(c)][2 * ax + 1];
            double gv = 0.0;
            if (fwd >= 0 && bwd >= 0)
                gv = (field.delta[static_cast<size_t>(fwd)] -
                      field.delta[static_cast<size_t>(bwd)]) /
                     (2 * h);
            else if (fwd >= 0)
                gv = (field.delta[static_cast<size_t>(fwd)] - del) / h;
            else if (bwd >= 0)
                gv = (del - field.delta[static_cast<size_t>(bwd)]) / h;
            (ax == 0 ? grad.x : grad.y) = gv;
        }
        const GridCell& cell = grid.cells[static_cast<size_t>(c)];
        rhs += w(cell.center).dot(grad) * cell.measure;
    }
    rhs = -rhs / band_width;
    return std::abs(lhs - rhs);
}

double Cutoff::operator()(double delta) const {
    const double p0 = plateau > 0 ? plateau : eps / 2;
    if (delta <= p0) return 1.0;
    if (delta >= eps) return 0.0;
    const double xi = (delta - p0) / (eps - p0);
    return 1.0 - xi * xi * (3 - 2 * xi);
}

MeanValueSurface mean_value_F(const WeightedGrid& grid,
                              const SignedDistanceField& field,
                              const HeatTrace& trace, Cutoff phi,
                              const std::vector<double>& radii,
                              const std::function<double(const Vec2&)>& lap_reg) {
    const double p0 = phi.plateau > 0 ? phi.plateau : phi.eps / 2;
    if (!(phi.eps > 0) || !(p0 > 0) || !(p0 < phi.eps))
        throw CutoffUnsupported("cutoff must plateau strictly inside (0, eps)");
    if (trace.snapshots.size() != trace.times.size())
        throw ConfigError("mean_value_F needs retained snapshots");

    MeanValueSurface out;
    out.times = trace.times;
    out.radii = radii;

    // Per-cell Laplacian of delta from the oracle, cut-locus cells skipped;
    // the cutoff vanishes there whenever eps stays below the inradius.
    std::vector<double> lap(grid.n_inside(), 0.0);
    std::vector<char> lap_ok(grid.n_inside(), 0);
    for (size_t i = 0; i < grid.n_inside(); ++i) {
        const GridCell& c = grid.cells[static_cast<size_t>(grid.inside_cells[i])];
        if (field.delta[static_cast<size_t>(grid.inside_cells[i])] >= phi.eps)
            continue; // outside the cutoff support, never needed
        try {
            lap[i] = lap_reg(c.center);
            lap_ok[i] = 1;
        } catch (const OnCutLocus&) {
        }
    }

    const int nfine = 257;
    std::vector<double> rfine(nfine);
    for (int k = 0; k < nfine; ++k) rfine[static_cast<size_t>(k)] = phi.eps * k / (nfine - 1);
    const double centers[3] = {0.3, 0.5, 0.7};
    const double width = 0.2;

    for (size_t ti = 0; ti < trace.times.size(); ++ti) {
        const auto& u = trace.snapshots[ti];
        std::vector<double> vm(grid.n_inside()), gm(grid.n_inside());
        std::vector<double> v(grid.n_inside());
        for (size_t i = 0; i < grid.n_inside(); ++i) {
            const int c = grid.inside_cells[i];
            v[i] = phi(field.delta[static_cast<size_t>(c)]) * (1.0 - u[i]);
            vm[i] = v[i] * grid.cells[static_cast<size_t>(c)].measure;
        }
        const std::vector<double> lap_v = apply_operator(grid, v, 1.0);
        for (size_t i = 0; i < grid.n_inside(); ++i)
            gm[i] = lap_v[i] * grid.cells[static_cast<size_t>(grid.inside_cells[i])].measure;

        const SuffixTable tv = make_suffix(grid, field, vm);
        const SuffixTable tg = make_suffix(grid, field, gm);

        std::vector<double> Frow;
        for (double r : radii) Frow.push_back(tv.tail(r));
        out.F.push_back(std::move(Frow));

        for (double cfrac : centers) {
            const double c0 = cfrac * phi.eps, w0 = width * phi.eps;
            std::vector<double> yl(static_cast<size_t>(nfine)), yr(static_cast<size_t>(nfine));
            for (int k = 0; k < nfine; ++k) {
                const double r = rfine[static_cast<size_t>(k)];
                const double xi = (r - c0) / w0;
                yl[static_cast<size_t>(k)] = tv.tail(r) * bump_dd(xi) / (w0 * w0);
                yr[static_cast<size_t>(k)] = tg.tail(r) * bump(xi);
            }
            const double lhs = trapezoid(rfine, yl);
            double rhs = trapezoid(rfine, yr);
            for (size_t i = 0; i < grid.n_inside(); ++i) {
                if (!lap_ok[i]) continue;
                const double del =
                    field.delta[static_cast<size_t>(grid.inside_cells[i])];
                rhs -= bump((del - c0) / w0) * v[i] * lap[i] *
                       grid.cells[static_cast<size_t>(grid.inside_cells[i])].measure;
            }
            const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
            out.identity_defects.push_back(std::abs(lhs - rhs) / scale);
        }
    }
    return out;
}

} // namespace mmheat
