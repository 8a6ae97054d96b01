#pragma once

#include <optional>
#include <utility>

#include "mmheat/domain.hpp"
#include "mmheat/heatflow.hpp"

namespace mmheat {

enum class FitModel { sqrt_only, sqrt_plus_linear };

struct AsymptoticFit {
    double c0 = 0; // volume
    double c1 = 0; // coefficient of sqrt(t), positive for shrinking Q
    double c2 = 0; // coefficient of t (0 under sqrt_only)
    std::pair<double, double> window{0, 0};
    double residual_rms = 0;
    // log-log slope of |Q - c0 + c1 sqrt(t)| with c2 withheld
    double exponent_estimate = 0;
};

struct FitOptions {
    std::optional<double> t_lo;     // window override
    std::optional<double> t_hi;
    std::optional<double> pin_c0;   // pin the constant term to the exact measure
    double h = 0;                   // grid spacing: enforces t_lo >= 100 h^2
    double eps = 0;                 // band width: enforces sqrt(t_hi) <= eps / 4
};

// Linear least squares of Q(t) against {1, sqrt(t)} or {1, sqrt(t), t} on the
// auto-selected window. Throws WindowTooNarrow below 8 in-window samples.
AsymptoticFit fit_expansion(const HeatTrace& trace, FitModel model,
                            const FitOptions& opts = {});

// c1 / sqrt(4/pi), the boundary length recovered from the principal term.
double perimeter_from_heat(const AsymptoticFit& fit);
double perimeter_from_heat(const HeatTrace& trace, const FitOptions& opts = {});

// log-log slope of |Q(t) - true_c0 + true_c1 sqrt(t)| over the window.
// Throws ResidualBelowNoise when the residual sits within 10x the solver
// tolerance and the slope would be fitting noise.
double remainder_exponent(const HeatTrace& trace, double true_c0,
                          double true_c1, const FitOptions& opts = {});

// Fitted t-coefficient against the curvature target (1/2) int H dsigma
// (disk: pi for every radius; interval: 0). Returns the relative defect
// (absolute for a zero target). Throws UnsupportedShape otherwise.
double second_order_check(const HeatTrace& trace, const DomainSpec& spec,
                          const FitOptions& opts = {});

// Richardson extrapolation of Q over two spacings at shared sample times:
// Q = (q Q_fine - Q_coarse) / (q - 1) with q = (h_coarse / h_fine)^order.
HeatTrace richardson_over_h(const HeatTrace& coarse, const HeatTrace& fine,
                            double h_coarse, double h_fine, double order);

} // namespace mmheat
