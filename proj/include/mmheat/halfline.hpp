#pragma once

#include <functional>
#include <vector>

namespace mmheat {

// Inhomogeneous heat problem on (0, infinity) with flux data at r = 0:
// (d_t - d_r^2) v = sigma, d_r v(t, 0) = v1(t), v(0, .) = v0.
struct HalfLineProblem {
    std::function<double(double)> v0;           // initial data, may be empty
    std::function<double(double)> v1;           // boundary flux, may be empty
    std::function<double(double, double)> sigma; // source (t, r), may be empty
    double t_max = 1.0;
};

// Reflection (Neumann) heat kernel on the half-line.
double neumann_kernel(double t, double r, double s);

// Duhamel representation: kernel smoothing of v0, plus the time-folded source
// term, minus the boundary-flux term. Adaptive quadrature to abs_tol; the
// time integrals are evaluated under tau = t - sigma^2 to remove the
// 1/sqrt(t - tau) endpoint singularity.
double duhamel_solve(const HalfLineProblem& p, double t, double r,
                     double abs_tol = 1e-9);

// R2(t) = int_0^t int e(t-tau,0,s) g(s) ds dtau for a time-independent source
// g on (0,1); returns the fitted log-log slope of t -> R2(t) over the grid.
// The default profile g(s) = s^(-1/(1+rho)+0.01) is in L^{1+rho} but barely.
double remainder_exponent_model(double rho, std::function<double(double)> g,
                                const std::vector<double>& t_grid);
double remainder_exponent_model(double rho, const std::vector<double>& t_grid);

// int_0^t e(tau, 0, s) dtau in closed form (building block of R2).
double kernel_time_integral(double t, double s);

} // namespace mmheat
