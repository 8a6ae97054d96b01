#include "mmheat/heatflow.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmheat/distfield.hpp"
#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// A = -L over inside cells (positive semidefinite, symmetric for uniform
// cell measure). (I + dt A) u^{n+1} = u^n is the implicit Euler step.
SpMat assemble_neg_laplacian(const WeightedGrid& g) {
    const int n = static_cast<int>(g.n_inside());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(g.edges.size() * 4 + g.boundary.size() + g.n_inside());
    std::vector<double> diag(static_cast<size_t>(n), 0.0);
    for (const GridEdge& e : g.edges) {
        const int a = g.inside_index[static_cast<size_t>(e.cell_a)];
        const int b = g.inside_index[static_cast<size_t>(e.cell_b)];
        const double w = e.conductance / g.cells[static_cast<size_t>(e.cell_a)].measure;
        trip.emplace_back(a, b, -w);
        trip.emplace_back(b, a, -w);
        diag[static_cast<size_t>(a)] += w;
        diag[static_cast<size_t>(b)] += w;
    }
    for (const BoundaryLink& bl : g.boundary) {
        const int a = g.inside_index[static_cast<size_t>(bl.cell)];
        diag[static_cast<size_t>(a)] +=
            bl.conductance / g.cells[static_cast<size_t>(bl.cell)].measure;
    }
    for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[static_cast<size_t>(i)]);
    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

HeatTrace run_flow(const WeightedGrid& grid, const Vec& f,
                   const std::vector<double>& sample_times,
                   const HeatSolveOptions& opts, int steps_per_decade) {
    if (sample_times.empty()) throw ConfigError("no sample times");
    for (size_t k = 0; k < sample_times.size(); ++k) {
        if (!(sample_times[k] > 0.0) ||
            (k > 0 && !(sample_times[k] > sample_times[k - 1])))
            throw ConfigError("sample times must be strictly increasing and positive");
    }
    const double t_max = sample_times.back();
    const double t_floor = std::min(1e-6 * t_max, sample_times.front() / 8.0);
    const double ratio = std::pow(10.0, 1.0 / steps_per_decade);

    const SpMat A = assemble_neg_laplacian(grid);
    const int n = static_cast<int>(grid.n_inside());
    Vec measures(n);
    for (int i = 0; i < n; ++i)
        measures[i] = grid.cells[static_cast<size_t>(grid.inside_cells[static_cast<size_t>(i)])].measure;

    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(opts.tolerance);
    cg.setMaxIterations(20000);

    HeatTrace trace;
    trace.meta.tolerance = opts.tolerance;
    trace.meta.steps_per_decade = steps_per_decade;

    Vec u = f;
    double t = 0.0;
    size_t next = 0;
    double current_dt = -1.0;
    SpMat B;
    while (next < sample_times.size()) {
        double dt = t == 0.0 ? t_floor : t * (ratio - 1.0);
        dt = std::min(dt, sample_times[next] - t);
        if (dt != current_dt) {
            B = A * dt;
            for (int i = 0; i < n; ++i) B.coeffRef(i, i) += 1.0;
            B.makeCompressed();
            cg.compute(B);
            current_dt = dt;
        }
        const Vec u_new = cg.solveWithGuess(u, u);
        if (cg.info() != Eigen::Success)
            throw LinearSolveFailure("conjugate gradient stalled at t = " +
                                         std::to_string(t + dt),
                                     cg.error());
        trace.meta.worst_residual = std::max(trace.meta.worst_residual, cg.error());
        u = u_new;
        t += dt;
        ++trace.meta.step_count;
        if (std::abs(t - sample_times[next]) <= 1e-12 * sample_times[next]) {
            trace.times.push_back(sample_times[next]);
            trace.Q.push_back(measures.dot(u));
            if (opts.keep_snapshots)
                trace.snapshots.emplace_back(u.data(), u.data() + n);
            ++next;
        }
    }
    return trace;
}

} // namespace

HeatTrace heat_solve_from(const WeightedGrid& grid, const std::vector<double>& f,
                          const std::vector<double>& sample_times,
                          const HeatSolveOptions& opts) {
    Vec f0 = Eigen::Map<const Vec>(f.data(), static_cast<Eigen::Index>(f.size()));
    HeatTrace trace = run_flow(grid, f0, sample_times, opts, opts.steps_per_decade);
    if (opts.richardson_dt) {
        const HeatTrace fine =
            run_flow(grid, f0, sample_times, opts, 2 * opts.steps_per_decade);
        for (size_t k = 0; k < trace.Q.size(); ++k)
            trace.Q[k] = 2.0 * fine.Q[k] - trace.Q[k];
        trace.snapshots = fine.snapshots;
        trace.meta = fine.meta;
        trace.meta.dt_richardson = 2.0;
    }
    return trace;
}

HeatTrace dirichlet_heat_solve(const WeightedGrid& grid,
                               const std::vector<double>& sample_times,
                               const HeatSolveOptions& opts) {
    std::vector<double> ones(grid.n_inside(), 1.0);
    return heat_solve_from(grid, ones, sample_times, opts);
}

double default_collar_width(double t_max) {
    return 6.0 * std::sqrt(t_max * std::log(1e12));
}

HeatTrace global_heat_solve(const WeightedGrid& collar_grid,
                            const std::vector<double>& f,
                            const std::vector<double>& sample_times,
                            const HeatSolveOptions& opts) {
    // The artificial far boundary must sit beyond the Gaussian range of the
    // data: width >= 4 sqrt(t_max log(1/tol)) from the support of f.
    const double t_max = sample_times.back();
    const double need = 4.0 * std::sqrt(t_max * std::log(1.0 / opts.tolerance));
    const BBox bb = bounding_box(collar_grid.domain);
    double width = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0.0) continue;
        const Vec2 c =
            collar_grid.cells[static_cast<size_t>(collar_grid.inside_cells[i])].center;
        width = std::min({width, c.x - bb.lo.x, bb.hi.x - c.x});
        if (collar_grid.dim == 2)
            width = std::min({width, c.y - bb.lo.y, bb.hi.y - c.y});
    }
    if (width < need)
        throw CollarTooThin("collar width " + std::to_string(width) +
                            " below required " + std::to_string(need));
    return heat_solve_from(collar_grid, f, sample_times, opts);
}

MaxPrincipleReport check_max_principle(const HeatTrace& trace) {
    MaxPrincipleReport rep;
    if (trace.snapshots.empty()) throw ConfigError("trace has no snapshots");
    for (size_t k = 0; k < trace.snapshots.size(); ++k) {
        const auto& snap = trace.snapshots[k];
        for (size_t i = 0; i < snap.size(); ++i) {
            const double v = std::max(snap[i] - 1.0, -snap[i]);
            if (v > rep.worst_violation) {
                rep.worst_violation = std::max(v, 0.0);
                rep.worst_cell = static_cast<int>(i);
                rep.worst_time = trace.times[k];
            }
        }
    }
    rep.pass = rep.worst_violation <= 1e-9;
    return rep;
}

MonotonicityReport check_domain_monotonicity(const DomainSpec& inner,
                                             const DomainSpec& outer, double h,
                                             double t) {
    const WeightedGrid gi = discretize(inner, h);
    const WeightedGrid go = discretize(outer, h);

    // chi_{Omega1} on the outer grid; the shared lattice makes cells comparable.
    std::vector<double> f(go.n_inside(), 0.0);
    for (size_t i = 0; i < go.n_inside(); ++i) {
        const GridCell& c = go.cells[static_cast<size_t>(go.inside_cells[i])];
        if (contains(inner, c.center)) f[i] = 1.0;
    }
    HeatSolveOptions opts;
    opts.keep_snapshots = true;
    const HeatTrace ti = dirichlet_heat_solve(gi, {t}, opts);
    const HeatTrace to = heat_solve_from(go, f, {t}, opts);

    MonotonicityReport rep;
    for (size_t i = 0; i < gi.n_inside(); ++i) {
        const GridCell& c = gi.cells[static_cast<size_t>(gi.inside_cells[i])];
        const int oc = go.cell_at(c.ix, c.iy);
        if (oc < 0 || go.inside_index[static_cast<size_t>(oc)] < 0)
            throw GridMisaligned("inner cell not contained in outer grid");
        const double ui = ti.snapshots[0][i];
        const double uo =
            to.snapshots[0][static_cast<size_t>(go.inside_index[static_cast<size_t>(oc)])];
        rep.worst_violation = std::max(rep.worst_violation, ui - uo);
    }
    rep.pass = rep.worst_violation <= 1e-9;
    return rep;
}

std::vector<std::pair<double, double>> kac_defect(const DomainSpec& spec, double h,
                                                  double K_margin,
                                                  const std::vector<double>& times) {
    if (K_margin < 8.0 * h)
        throw ConfigError("K_margin must be at least 8h");
    const WeightedGrid gd = discretize(spec, h);
    const double t_max = *std::max_element(times.begin(), times.end());
    const WeightedGrid gc = make_collar_grid(spec, h, default_collar_width(t_max));

    std::vector<int> K; // inner inside-cell indices with delta > K_margin
    for (size_t i = 0; i < gd.n_inside(); ++i) {
        const GridCell& c = gd.cells[static_cast<size_t>(gd.inside_cells[i])];
        if (signed_distance_exact(spec, c.center) > K_margin)
            K.push_back(static_cast<int>(i));
    }
    if (K.empty()) throw EmptyCompactSet("no cells with delta > K_margin");

    std::vector<double> f(gc.n_inside(), 0.0);
    for (size_t i = 0; i < gc.n_inside(); ++i) {
        const GridCell& c = gc.cells[static_cast<size_t>(gc.inside_cells[i])];
        if (contains(spec, c.center)) f[i] = 1.0;
    }
    std::vector<double> ts = times;
    std::sort(ts.begin(), ts.end());
    HeatSolveOptions opts;
    opts.keep_snapshots = true;
    const HeatTrace trd = dirichlet_heat_solve(gd, ts, opts);
    const HeatTrace trg = global_heat_solve(gc, f, ts, opts);

    std::vector<std::pair<double, double>> out;
    for (size_t k = 0; k < ts.size(); ++k) {
        double l1 = 0.0;
        for (int i : K) {
            const GridCell& c = gd.cells[static_cast<size_t>(gd.inside_cells[static_cast<size_t>(i)])];
            const int cc = gc.cell_at(c.ix, c.iy);
            const int ci = gc.inside_index[static_cast<size_t>(cc)];
            l1 += c.measure * std::abs(trg.snapshots[k][static_cast<size_t>(ci)] -
                                       trd.snapshots[k][static_cast<size_t>(i)]);
        }
        out.emplace_back(ts[k], l1 / ts[k]);
    }
    return out;
}

std::vector<double> apply_operator(const WeightedGrid& grid,
                                   const std::vector<double>& inside_values,
                                   double ghost_value) {
    std::vector<double> out(grid.n_inside(), 0.0);
    for (const GridEdge& e : grid.edges) {
        const int a = grid.inside_index[static_cast<size_t>(e.cell_a)];
        const int b = grid.inside_index[static_cast<size_t>(e.cell_b)];
        const double flux = e.conductance * (inside_values[static_cast<size_t>(b)] -
                                             inside_values[static_cast<size_t>(a)]);
        out[static_cast<size_t>(a)] += flux / grid.cells[static_cast<size_t>(e.cell_a)].measure;
        out[static_cast<size_t>(b)] -= flux / grid.cells[static_cast<size_t>(e.cell_b)].measure;
    }
    for (const BoundaryLink& bl : grid.boundary) {
        const int a = grid.inside_index[static_cast<size_t>(bl.cell)];
        out[static_cast<size_t>(a)] +=
            bl.conductance * (ghost_value - inside_values[static_cast<size_t>(a)]) /
            grid.cells[static_cast<size_t>(bl.cell)].measure;
    }
    return out;
}

double dirichlet_energy(const WeightedGrid& grid, const std::vector<double>& u) {
    double e = 0.0;
    for (const GridEdge& ed : grid.edges) {
        const double d = u[static_cast<size_t>(grid.inside_index[static_cast<size_t>(ed.cell_a)])] -
                         u[static_cast<size_t>(grid.inside_index[static_cast<size_t>(ed.cell_b)])];
        e += ed.conductance * d * d;
    }
    for (const BoundaryLink& bl : grid.boundary) {
        const double v = u[static_cast<size_t>(grid.inside_index[static_cast<size_t>(bl.cell)])];
        e += bl.conductance * v * v;
    }
    return e;
}

} // namespace mmheat
