#include "doctest.h"

#include <cmath>
#include <vector>

#include "mmheat/errors.hpp"
#include "mmheat/halfline.hpp"

using namespace mmheat;

namespace {

// Crank-Nicolson reference for (d_t - d_r^2) v = sigma on (0, L), Neumann at
// r = 0, Dirichlet at r = L, v(0, .) = 0. Returns v(t_end, 0).
double crank_nicolson_origin(const std::function<double(double)>& source,
                             double t_end, double L, int n, int steps) {
    const double dr = L / n;
    const double dt = t_end / steps;
    const double lam = dt / (2 * dr * dr);
    std::vector<double> v(static_cast<size_t>(n), 0.0); // nodes r_i = i dr, i < n
    std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n)),
        c(static_cast<size_t>(n)), d(static_cast<size_t>(n));
    for (int k = 0; k < steps; ++k) {
        for (int i = 0; i < n; ++i) {
            const double s = source(i * dr);
            const double vm = i > 0 ? v[static_cast<size_t>(i - 1)] : v[1];
            const double vp = i + 1 < n ? v[static_cast<size_t>(i + 1)] : 0.0;
            d[static_cast<size_t>(i)] = v[static_cast<size_t>(i)] +
                                        lam * (vm - 2 * v[static_cast<size_t>(i)] + vp) +
                                        dt * s;
            a[static_cast<size_t>(i)] = -lam;
            b[static_cast<size_t>(i)] = 1 + 2 * lam;
            c[static_cast<size_t>(i)] = -lam;
        }
        // Reflected ghost at r = -dr enforces the Neumann condition.
        c[0] = -2 * lam;
        a[0] = 0;
        // Thomas sweep.
        for (int i = 1; i < n; ++i) {
            const double m = a[static_cast<size_t>(i)] / b[static_cast<size_t>(i - 1)];
            b[static_cast<size_t>(i)] -= m * c[static_cast<size_t>(i - 1)];
            d[static_cast<size_t>(i)] -= m * d[static_cast<size_t>(i - 1)];
        }
        v[static_cast<size_t>(n - 1)] =
            d[static_cast<size_t>(n - 1)] / b[static_cast<size_t>(n - 1)];
        for (int i = n - 2; i >= 0; --i)
            v[static_cast<size_t>(i)] = (d[static_cast<size_t>(i)] -
                                         c[static_cast<size_t>(i)] *
                                             v[static_cast<size_t>(i + 1)]) /
                                        b[static_cast<size_t>(i)];
    }
    return v[0];
}

} // namespace

TEST_CASE("kernel closed-form values") {
    CHECK(neumann_kernel(0.2, 0, 0) ==
          doctest::Approx(1.0 / std::sqrt(M_PI * 0.2)).epsilon(1e-14));
    CHECK(neumann_kernel(0.1, 0.2, 0.7) ==
          doctest::Approx(neumann_kernel(0.1, 0.7, 0.2)).epsilon(1e-14));
}

TEST_CASE("kernel has unit mass") {
    for (auto [t, r] : std::vector<std::pair<double, double>>{
             {0.05, 0.3}, {0.01, 0.0}, {1.0, 2.0}, {0.25, 0.1}, {0.003, 0.05}}) {
        // Simpson over 16-sigma window around r plus the reflected lobe at 0.
        const double w = 16.0 * std::sqrt(t);
        const double hi = r + w;
        const int n = 8192;
        double mass = 0.0;
        for (int i = 0; i < n; ++i) {
            const double s0 = hi * i / n, s1 = hi * (i + 1) / n;
            mass += (s1 - s0) / 6.0 *
                    (neumann_kernel(t, r, s0) +
                     4 * neumann_kernel(t, r, 0.5 * (s0 + s1)) +
                     neumann_kernel(t, r, s1));
        }
        CHECK(std::abs(mass - 1.0) <= 1e-12);
    }
}

TEST_CASE("constant flux reproduces the principal term") {
    for (double P : {1.0, 2 * M_PI}) {
        HalfLineProblem p;
        p.v1 = [P](double) { return -P; };
        for (double t : {1e-4, 1e-2, 1.0}) {
            const double want = std::sqrt(4 * t / M_PI) * P;
            CHECK(std::abs(duhamel_solve(p, t, 0.0) - want) <= 1e-8 * want);
        }
    }
}

TEST_CASE("unit initial data stays at one") {
    HalfLineProblem p;
    p.v0 = [](double) { return 1.0; };
    for (auto [t, r] : std::vector<std::pair<double, double>>{
             {0.01, 0.0}, {0.1, 0.5}, {1.0, 3.0}})
        CHECK(duhamel_solve(p, t, r) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("indicator source matches a Crank-Nicolson reference") {
    HalfLineProblem p;
    p.sigma = [](double, double s) { return s < 1.0 ? 1.0 : 0.0; };
    const double got = duhamel_solve(p, 0.01, 0.0);
    const double ref = crank_nicolson_origin(
        [](double s) { return s < 1.0 ? 1.0 : 0.0; }, 0.01, 5.0, 8000, 400);
    CHECK(std::abs(got - ref) <= 1e-6);
}

TEST_CASE("solver is linear in the data") {
    HalfLineProblem pa, pb, pc;
    pa.v0 = [](double s) { return std::exp(-s); };
    pb.v1 = [](double t) { return -1.0 - t; };
    pc.v0 = pa.v0;
    pc.v1 = pb.v1;
    const double t = 0.05, r = 0.2;
    CHECK(duhamel_solve(pc, t, r) ==
          doctest::Approx(duhamel_solve(pa, t, r) + duhamel_solve(pb, t, r))
              .epsilon(1e-8));
}

TEST_CASE("interior PDE residual for a smooth source") {
    HalfLineProblem p;
    p.sigma = [](double, double s) { return std::exp(-s * s); };
    const double dt = 1e-3, dr = 1e-3;
    for (auto [t, r] : std::vector<std::pair<double, double>>{
             {0.05, 0.4}, {0.1, 1.0}}) {
        const double vtp = duhamel_solve(p, t + dt, r, 1e-11);
        const double vtm = duhamel_solve(p, t - dt, r, 1e-11);
        const double vrp = duhamel_solve(p, t, r + dr, 1e-11);
        const double vrm = duhamel_solve(p, t, r - dr, 1e-11);
        const double v0 = duhamel_solve(p, t, r, 1e-11);
        const double res = (vtp - vtm) / (2 * dt) -
                           (vrp - 2 * v0 + vrm) / (dr * dr) -
                           std::exp(-r * r);
        CHECK(std::abs(res) <= 1e-4);
    }
}

TEST_CASE("boundary flux is attained") {
    HalfLineProblem p;
    p.v1 = [](double t) { return -2.0 + t; };
    const double t = 0.1, dr = 1e-3;
    const double v0 = duhamel_solve(p, t, 0.0, 1e-11);
    const double v1 = duhamel_solve(p, t, dr, 1e-11);
    const double v2 = duhamel_solve(p, t, 2 * dr, 1e-11);
    const double slope = (-3 * v0 + 4 * v1 - v2) / (2 * dr);
    CHECK(std::abs(slope - (-2.0 + t)) <= 1e-3);
}

TEST_CASE("refined tolerance agrees with itself") {
    HalfLineProblem p;
    p.v0 = [](double s) { return 1.0 / (1.0 + s); };
    p.sigma = [](double t, double s) { return std::exp(-t) / (1.0 + s * s); };
    const double coarse = duhamel_solve(p, 0.2, 0.3, 1e-9);
    const double fine = duhamel_solve(p, 0.2, 0.3, 1e-12);
    CHECK(std::abs(coarse - fine) <= 1e-8);
}

TEST_CASE("time integral of the origin kernel") {
    // Against direct quadrature of e(tau, 0, s) in tau = w^2.
    const double t = 0.07, s = 0.3;
    const int n = 200000;
    const double sqt = std::sqrt(t);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = sqt * (i + 0.5) / n;
        acc += 2.0 * w * neumann_kernel(w * w, 0, s) * sqt / n;
    }
    CHECK(kernel_time_integral(t, s) == doctest::Approx(acc).epsilon(1e-8));
}

TEST_CASE("remainder model slopes") {
    std::vector<double> ts;
    for (int k = 0; k < 8; ++k) ts.push_back(1e-4 * std::pow(2.0, k));

    const double slope_rho1 = remainder_exponent_model(1.0, ts);
    CHECK(slope_rho1 >= 0.75 - 0.05);

    const double slope_flat =
        remainder_exponent_model(1.0, [](double) { return 1.0; }, ts);
    CHECK(std::abs(slope_flat - 1.0) <= 0.05);
}

TEST_CASE("empty problem is identically zero") {
    HalfLineProblem p;
    CHECK(duhamel_solve(p, 0.5, 0.1) == 0.0);
}
