#include "doctest.h"

#include <cmath>
#include <random>

#include "mmheat/distfield.hpp"
#include "mmheat/domain.hpp"
#include "mmheat/errors.hpp"
#include "mmheat/grid.hpp"
#include "mmheat/heatflow.hpp"

using namespace mmheat;

namespace {

// Fourier sine-series heat content of the unit interval,
// Q(t) = sum_{k odd} 8/(k^2 pi^2) exp(-k^2 pi^2 t).
double interval_Q(double t) {
    double q = 0.0;
    for (long k = 1; k <= 100000; k += 2) {
        const double lam = k * M_PI * k * M_PI;
        const double term = 8.0 / lam * std::exp(-lam * t);
        q += term;
        if (term < 1e-18 && k > 9) break;
    }
    return q;
}

} // namespace

TEST_CASE("interval heat content matches the Fourier oracle") {
    const WeightedGrid g = discretize(make_interval(0, 1), 1.0 / 512);
    const std::vector<double> times = {1e-4, 1e-3, 1e-2, 1e-1};
    HeatSolveOptions opts;
    opts.steps_per_decade = 64;
    opts.richardson_dt = true;
    const HeatTrace tr = dirichlet_heat_solve(g, times, opts);
    for (size_t k = 0; k < times.size(); ++k)
        CHECK(std::abs(tr.Q[k] - interval_Q(times[k])) <= 1e-3);
    // Reflection closed form: Q(t) = 1 - 4 sqrt(t/pi) + O(e^{-1/4t}).
    CHECK(interval_Q(0.01) ==
          doctest::Approx(1.0 - 4.0 * std::sqrt(0.01 / M_PI)).epsilon(1e-8));
}

TEST_CASE("Q is close to the measure at tiny times") {
    const WeightedGrid g = discretize(make_rect({0, 0}, 1, 1), 1.0 / 64);
    const HeatTrace tr = dirichlet_heat_solve(g, {1e-6});
    CHECK(tr.Q[0] >= 0.999 * g.inside_measure());
}

TEST_CASE("disk heat content tracks the two-term Riemannian expansion") {
    const double t = 1e-3;
    const WeightedGrid g = discretize(make_disk({0, 0}, 1.0), 1.0 / 256);
    const HeatTrace tr = dirichlet_heat_solve(g, {t});
    const double target = M_PI - std::sqrt(4 * t / M_PI) * 2 * M_PI + M_PI * t;
    CHECK(tr.Q[0] == doctest::Approx(target).epsilon(0.01));
}

TEST_CASE("Q nonincreasing and energy decay") {
    const WeightedGrid g = discretize(make_rect({0, 0}, 1, 0.6), 1.0 / 32);
    HeatSolveOptions opts;
    opts.keep_snapshots = true;
    const std::vector<double> times = {1e-4, 1e-3, 1e-2, 1e-1};
    const HeatTrace tr = dirichlet_heat_solve(g, times, opts);
    for (size_t k = 1; k < tr.Q.size(); ++k) {
        CHECK(tr.Q[k] <= tr.Q[k - 1] + 1e-12);
        CHECK(dirichlet_energy(g, tr.snapshots[k]) <=
              dirichlet_energy(g, tr.snapshots[k - 1]) + 1e-9);
    }
    CHECK(tr.Q[0] <= g.inside_measure() + 1e-12);
}

TEST_CASE("max principle holds and the corrupted control fails") {
    const WeightedGrid g = discretize(make_disk({0, 0}, 1.0), 1.0 / 32);
    HeatSolveOptions opts;
    opts.keep_snapshots = true;
    HeatTrace tr = dirichlet_heat_solve(g, {1e-3, 1e-2}, opts);
    const MaxPrincipleReport rep = check_max_principle(tr);
    CHECK(rep.pass);
    CHECK(rep.worst_violation <= 1e-9);

    tr.snapshots[1][7] = 1.5;
    const MaxPrincipleReport bad = check_max_principle(tr);
    CHECK(!bad.pass);
    CHECK(bad.worst_cell == 7);
}

TEST_CASE("order preservation of the implicit flow") {
    const WeightedGrid g = discretize(make_interval(0, 1), 1.0 / 128);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> f(g.n_inside()), ggt(g.n_inside());
    for (size_t i = 0; i < f.size(); ++i) {
        f[i] = uni(rng);
        ggt[i] = f[i] + uni(rng); // g >= f
    }
    HeatSolveOptions opts;
    opts.keep_snapshots = true;
    const HeatTrace tf = heat_solve_from(g, f, {1e-3, 1e-2}, opts);
    const HeatTrace tg = heat_solve_from(g, ggt, {1e-3, 1e-2}, opts);
    for (size_t k = 0; k < 2; ++k)
        for (size_t i = 0; i < f.size(); ++i)
            CHECK(tf.snapshots[k][i] <= tg.snapshots[k][i] + 1e-9);
}

TEST_CASE("domain monotonicity") {
    const double h = 1.0 / 128, t = 1e-3;
    CHECK(check_domain_monotonicity(make_disk({0, 0}, 0.5), make_disk({0, 0}, 1.0), h, t).pass);
    // Equal domains: equality up to solver tolerance.
    const MonotonicityReport eq =
        check_domain_monotonicity(make_disk({0, 0}, 1.0), make_disk({0, 0}, 1.0), h, t);
    CHECK(std::abs(eq.worst_violation) <= 1e-9);
    // Shifted rectangle inside the disk.
    CHECK(check_domain_monotonicity(make_rect({-0.5, -0.5}, 1.0, 1.0),
                                    make_disk({0, 0}, 1.0), h, t)
              .pass);
}

TEST_CASE("global flow: constants, Gaussian tails, mass conservation") {
    const DomainSpec disk = make_disk({0, 0}, 1.0);
    const double h = 1.0 / 64, t = 1e-4;
    const WeightedGrid gc = make_collar_grid(disk, h, default_collar_width(t));
    std::vector<double> ones(gc.n_inside(), 1.0);
    std::vector<double> chi(gc.n_inside(), 0.0);
    double mass0 = 0.0;
    for (size_t i = 0; i < gc.n_inside(); ++i) {
        const GridCell& c = gc.cells[static_cast<size_t>(gc.inside_cells[i])];
        if (contains(disk, c.center)) chi[i] = 1.0;
        mass0 += chi[i] * c.measure;
    }
    HeatSolveOptions opts;
    opts.keep_snapshots = true;

    // Constants are invariant away from the artificial far edge.
    const HeatTrace tc = heat_solve_from(gc, ones, {t}, opts);
    for (size_t i = 0; i < gc.n_inside(); ++i) {
        const GridCell& c = gc.cells[static_cast<size_t>(gc.inside_cells[i])];
        if (signed_distance_exact(disk, c.center) > -0.1)
            CHECK(tc.snapshots[0][i] == doctest::Approx(1.0).epsilon(1e-9));
    }

    const HeatTrace tg = global_heat_solve(gc, chi, {t}, opts);
    // Value at the disk center: the boundary is 1 away, astronomically far
    // relative to sqrt(t).
    for (size_t i = 0; i < gc.n_inside(); ++i) {
        const GridCell& c = gc.cells[static_cast<size_t>(gc.inside_cells[i])];
        if (std::abs(c.center.x) < h && std::abs(c.center.y) < h)
            CHECK(std::abs(tg.snapshots[0][i] - 1.0) <= 1e-8);
    }
    double mass1 = 0.0;
    for (size_t i = 0; i < gc.n_inside(); ++i)
        mass1 += tg.snapshots[0][i] *
                 gc.cells[static_cast<size_t>(gc.inside_cells[i])].measure;
    CHECK(std::abs(mass1 - mass0) <= 1e-6 * mass0);

    // Positivity of the Kac difference: global flow dominates Dirichlet flow.
    const WeightedGrid gd = discretize(disk, h);
    const HeatTrace td = dirichlet_heat_solve(gd, {t}, opts);
    for (size_t i = 0; i < gd.n_inside(); ++i) {
        const GridCell& c = gd.cells[static_cast<size_t>(gd.inside_cells[i])];
        const int cc = gc.cell_at(c.ix, c.iy);
        const int ci = gc.inside_index[static_cast<size_t>(cc)];
        CHECK(tg.snapshots[0][static_cast<size_t>(ci)] >= td.snapshots[0][i] - 1e-9);
    }
}

TEST_CASE("collar too thin is rejected") {
    const DomainSpec disk = make_disk({0, 0}, 1.0);
    const WeightedGrid gc = make_collar_grid(disk, 1.0 / 32, 0.05);
    std::vector<double> chi(gc.n_inside(), 0.0);
    for (size_t i = 0; i < gc.n_inside(); ++i)
        if (contains(disk, gc.cells[static_cast<size_t>(gc.inside_cells[i])].center))
            chi[i] = 1.0;
    CHECK_THROWS_AS(global_heat_solve(gc, chi, {0.01}), CollarTooThin);
}

TEST_CASE("Kac defect decreases on the interval") {
    std::vector<double> times;
    for (int k = 6; k >= 1; --k) times.push_back(0.1 * std::pow(4.0, -k));
    const auto def = kac_defect(make_interval(0, 1), 1.0 / 256, 0.4, times);
    // The locality ratio vanishes as t -> 0: tiny times sit at the noise
    // floor, large times carry real signal, and it grows with t.
    for (const auto& [t, r] : def) CHECK(r >= -1e-9);
    CHECK(def.front().second <= 1e-6);
    CHECK(def.back().second >= 100 * std::max(def.front().second, 1e-12));
    for (size_t k = 1; k < def.size(); ++k)
        if (def[k - 1].second > 1e-7) CHECK(def[k].second >= def[k - 1].second);
}

TEST_CASE("Kac preconditions") {
    CHECK_THROWS_AS(kac_defect(make_interval(0, 1), 1.0 / 64, 0.6, {1e-3}),
                    EmptyCompactSet);
}
