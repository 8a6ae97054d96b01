#include "mmheat/asympt.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

struct Window {
    std::vector<size_t> idx;
    double t_lo, t_hi;
};

Window select_window(const HeatTrace& trace, const FitOptions& opts) {
    if (trace.times.empty()) throw WindowTooNarrow("empty trace");
    double t_lo = opts.t_lo.value_or(0.0);
    double t_hi = opts.t_hi.value_or(trace.times.back());
    if (opts.h > 0) t_lo = std::max(t_lo, 100.0 * opts.h * opts.h);
    if (opts.eps > 0) t_hi = std::min(t_hi, opts.eps * opts.eps / 16.0);
    Window w{{}, t_lo, t_hi};
    for (size_t i = 0; i < trace.times.size(); ++i)
        if (trace.times[i] >= t_lo && trace.times[i] <= t_hi) w.idx.push_back(i);
    if (w.idx.size() < 8)
        throw WindowTooNarrow("fit window holds fewer than 8 samples");
    return w;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    const auto n = static_cast<double>(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double num = 0, den = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

} // namespace

AsymptoticFit fit_expansion(const HeatTrace& trace, FitModel model,
                            const FitOptions& opts) {
    const Window w = select_window(trace, opts);
    const bool pinned = opts.pin_c0.has_value();
    const int ncol = (model == FitModel::sqrt_only ? 2 : 3) - (pinned ? 1 : 0);
    const auto nrow = static_cast<Eigen::Index>(w.idx.size());

    Eigen::MatrixXd A(nrow, ncol);
    Eigen::VectorXd b(nrow);
    for (Eigen::Index r = 0; r < nrow; ++r) {
        const double t = trace.times[w.idx[static_cast<size_t>(r)]];
        const double q = trace.Q[w.idx[static_cast<size_t>(r)]];
        int c = 0;
        if (!pinned) A(r, c++) = 1.0;
        A(r, c++) = -std::sqrt(t);
        if (model == FitModel::sqrt_plus_linear) A(r, c++) = t;
        b(r) = pinned ? q - *opts.pin_c0 : q;
    }
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);

    AsymptoticFit fit;
    fit.window = {w.t_lo, w.t_hi};
    int c = 0;
    fit.c0 = pinned ? *opts.pin_c0 : x(c++);
    fit.c1 = x(c++);
    fit.c2 = model == FitModel::sqrt_plus_linear ? x(c++) : 0.0;
    fit.residual_rms =
        (A * x - b).norm() / std::sqrt(static_cast<double>(nrow));

    // Slope of the residual against {1, sqrt(t)} alone.
    std::vector<double> lt, lr;
    for (size_t i : w.idx) {
        const double res = std::abs(trace.Q[i] - fit.c0 +
                                    fit.c1 * std::sqrt(trace.times[i]));
        if (res > 0) {
            lt.push_back(std::log(trace.times[i]));
            lr.push_back(std::log(res));
        }
    }
    fit.exponent_estimate = lt.size() >= 2 ? loglog_slope(lt, lr) : 0.0;
    return fit;
}

double perimeter_from_heat(const AsymptoticFit& fit) {
    return fit.c1 / std::sqrt(4.0 / M_PI);
}

double perimeter_from_heat(const HeatTrace& trace, const FitOptions& opts) {
    return perimeter_from_heat(
        fit_expansion(trace, FitModel::sqrt_plus_linear, opts));
}

double remainder_exponent(const HeatTrace& trace, double true_c0,
                          double true_c1, const FitOptions& opts) {
    const Window w = select_window(trace, opts);
    const double noise_floor = 10.0 * trace.meta.tolerance;
    std::vector<double> lt, lr;
    double worst = 0;
    for (size_t i : w.idx) {
        const double res = std::abs(trace.Q[i] - true_c0 +
                                    true_c1 * std::sqrt(trace.times[i]));
        worst = std::max(worst, res);
        if (res > 0) {
            lt.push_back(std::log(trace.times[i]));
            lr.push_back(std::log(res));
        }
    }
    if (worst <= noise_floor)
        throw ResidualBelowNoise("remainder within 10x solver tolerance");
    if (lt.size() < 2) throw WindowTooNarrow("not enough nonzero residuals");
    return loglog_slope(lt, lr);
}

double second_order_check(const HeatTrace& trace, const DomainSpec& spec,
                          const FitOptions& opts) {
    FitOptions o = opts;
    if (!o.pin_c0) o.pin_c0 = continuum_measure(spec);
    const AsymptoticFit fit =
        fit_expansion(trace, FitModel::sqrt_plus_linear, o);
    if (is_interval(spec)) return std::abs(fit.c2); // H = 0, absolute defect
    if (const auto* d = std::get_if<Disk>(&spec.shape)) {
        // (1/2) int H dsigma = (1/2)(1/R)(2 pi R) = pi for every radius.
        (void)d;
        return std::abs(fit.c2 - M_PI) / M_PI;
    }
    throw UnsupportedShape("second-order benchmark needs a smooth boundary");
}

HeatTrace richardson_over_h(const HeatTrace& coarse, const HeatTrace& fine,
                            double h_coarse, double h_fine, double order) {
    if (coarse.times.size() != fine.times.size())
        throw ConfigError("richardson_over_h needs matching sample times");
    const double q = std::pow(h_coarse / h_fine, order);
    HeatTrace out;
    out.times = fine.times;
    out.meta = fine.meta;
    out.Q.resize(fine.Q.size());
    for (size_t i = 0; i < fine.Q.size(); ++i) {
        if (std::abs(coarse.times[i] - fine.times[i]) >
            1e-12 * std::max(1.0, fine.times[i]))
            throw ConfigError("richardson_over_h needs matching sample times");
        out.Q[i] = (q * fine.Q[i] - coarse.Q[i]) / (q - 1.0);
    }
    return out;
}

} // namespace mmheat
