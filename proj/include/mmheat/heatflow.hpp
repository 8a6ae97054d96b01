#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmheat/grid.hpp"

namespace mmheat {

struct SolverMeta {
    double tolerance = 1e-10;     // relative residual of the linear solves
    int steps_per_decade = 32;    // geometric sub-step density
    int step_count = 0;
    double worst_residual = 0.0;
    double dt_richardson = 0.0;   // >0 when the trace was dt-extrapolated
};

struct HeatTrace {
    std::vector<double> times;
    std::vector<double> Q;
    // One entry per sample time when retained; values over inside cells in
    // grid.inside_cells order.
    std::vector<std::vector<double>> snapshots;
    SolverMeta meta;
};

struct HeatSolveOptions {
    double tolerance = 1e-10;
    int steps_per_decade = 32;
    bool keep_snapshots = false;
    bool richardson_dt = false; // second solve at doubled step density, extrapolated Q
};

// Implicit Euler for u_t = Lu from u0 = 1 on inside cells, zero Dirichlet
// data eliminated through the boundary links. Q(t_k) = sum m_cell u(t_k).
HeatTrace dirichlet_heat_solve(const WeightedGrid& grid,
                               const std::vector<double>& sample_times,
                               const HeatSolveOptions& opts = {});

// Same flow from arbitrary initial data f (used for monotonicity checks and
// for the whole-space flow on a collar grid).
HeatTrace heat_solve_from(const WeightedGrid& grid, const std::vector<double>& f,
                          const std::vector<double>& sample_times,
                          const HeatSolveOptions& opts = {});

// Whole-space heat flow proxy: solves on a collar grid around the domain.
// Throws CollarTooThin unless width >= 4 sqrt(t_max log(1/tol)).
HeatTrace global_heat_solve(const WeightedGrid& collar_grid,
                            const std::vector<double>& f,
                            const std::vector<double>& sample_times,
                            const HeatSolveOptions& opts = {});

double default_collar_width(double t_max);

struct MaxPrincipleReport {
    bool pass = false;
    double worst_violation = 0.0;
    int worst_cell = -1;
    double worst_time = 0.0;
};

// Asserts 0 <= u <= 1 cell-wise within 1e-9 on all retained snapshots.
MaxPrincipleReport check_max_principle(const HeatTrace& trace);

struct MonotonicityReport {
    bool pass = false;
    double worst_violation = 0.0;
};

// Solves both domains at the shared h with f = chi_{Omega1} and checks
// u^{Omega1} <= u^{Omega2} + 1e-9 on the common cells.
MonotonicityReport check_domain_monotonicity(const DomainSpec& inner,
                                             const DomainSpec& outer, double h,
                                             double t);

// Kac's principle defect ||h_t f - h_t^Omega f||_{L1(K)} / t on
// K = {delta > K_margin}, over the given times.
std::vector<std::pair<double, double>> kac_defect(const DomainSpec& spec, double h,
                                                  double K_margin,
                                                  const std::vector<double>& times);

// Discrete Laplacian application with prescribed ghost (Dirichlet) value;
// exposed for the mean-value machinery in the coarea module.
std::vector<double> apply_operator(const WeightedGrid& grid,
                                   const std::vector<double>& inside_values,
                                   double ghost_value);

// Discrete Dirichlet energy sum c_e (u_a - u_b)^2 + boundary terms.
double dirichlet_energy(const WeightedGrid& grid, const std::vector<double>& u);

} // namespace mmheat
