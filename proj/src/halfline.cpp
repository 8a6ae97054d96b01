#include "mmheat/halfline.hpp"

#include <cmath>
#include <utility>

#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

// Adaptive Simpson with absolute tolerance and depth cap.
struct Quad {
    const std::function<double(double)>& f;
    double tol;
    int max_depth = 48;

    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
        const double err = left + right - whole;
        if (std::abs(err) <= 15 * tol || depth >= max_depth) {
            if (depth >= max_depth && std::abs(err) > 15 * tol)
                throw QuadratureFailure("adaptive Simpson depth cap",
                                        std::abs(err) / 15);
            return left + right + err / 15.0;
        }
        return recurse(a, m, fa, flm, fm, left, depth + 1) +
               recurse(m, b, fm, frm, fb, right, depth + 1);
    }

    double operator()(double a, double b) const {
        if (!(a < b)) return 0.0;
        const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole, 0);
    }
};

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    return Quad{f, tol}(a, b);
}

constexpr double kTailSigmas = 16.0; // exp(-16^2/4) ~ 1e-28, beyond any tol

} // namespace

double neumann_kernel(double t, double r, double s) {
    const double c = 1.0 / std::sqrt(4.0 * M_PI * t);
    const double d1 = r - s, d2 = r + s;
    return c * (std::exp(-d1 * d1 / (4 * t)) + std::exp(-d2 * d2 / (4 * t)));
}

double duhamel_solve(const HalfLineProblem& p, double t, double r,
                     double abs_tol) {
    if (!(t > 0) || r < 0)
        throw ConfigError("duhamel_solve needs t > 0, r >= 0");
    double v = 0.0;
    const double tol = abs_tol / 3.0;
    const double sqt = std::sqrt(t);

    if (p.v0) {
        const double lo = std::max(0.0, r - kTailSigmas * sqt);
        const double hi = r + kTailSigmas * sqt;
        const std::function<double(double)> f = [&](double s) {
            return neumann_kernel(t, r, s) * p.v0(s);
        };
        v += integrate(f, lo, hi, tol);
    }

    if (p.sigma) {
        // tau = t - w^2: int_0^t dtau -> int_0^sqrt(t) 2 w dw with kernel
        // e(w^2, r, s) concentrated in |s - r| <~ w.
        const std::function<double(double)> outer = [&](double w) {
            if (w <= 0) return 0.0;
            const double tau = t - w * w;
            const double lo = std::max(0.0, r - kTailSigmas * w);
            const double hi = r + kTailSigmas * w;
            const std::function<double(double)> inner = [&](double s) {
                return neumann_kernel(w * w, r, s) * p.sigma(tau, s);
            };
            return 2.0 * w * integrate(inner, lo, hi, tol / sqt);
        };
        v += integrate(outer, 0.0, sqt, tol);
    }

    if (p.v1) {
        // e(w^2, r, 0) = exp(-r^2 / (4 w^2)) / (w sqrt(pi)).
        const std::function<double(double)> f = [&](double w) {
            const double damp =
                w > 0 ? std::exp(-r * r / (4 * w * w)) : (r == 0 ? 1.0 : 0.0);
            return (2.0 / std::sqrt(M_PI)) * damp * p.v1(t - w * w);
        };
        v -= integrate(f, 0.0, sqt, tol);
    }
    return v;
}

double kernel_time_integral(double t, double s) {
    // int_0^t e(tau, 0, s) dtau = 2 sqrt(t/pi) e^{-s^2/4t} - s erfc(s/(2 sqrt t)).
    const double sqt = std::sqrt(t);
    return 2.0 * sqt / std::sqrt(M_PI) * std::exp(-s * s / (4 * t)) -
           s * std::erfc(s / (2 * sqt));
}

double remainder_exponent_model(double rho, std::function<double(double)> g,
                                const std::vector<double>& t_grid) {
    if (!(rho > 0)) throw ConfigError("remainder model needs rho > 0");
    if (t_grid.size() < 2)
        throw ConfigError("remainder model needs at least two times");
    std::vector<double> lt, lr;
    for (double t : t_grid) {
        // s = u^4 flattens the admissible s^{-1/(1+rho)+0.01} singularity.
        const std::function<double(double)> f = [&](double u) {
            const double s = u * u * u * u;
            return 4.0 * u * u * u * g(s) * kernel_time_integral(t, s);
        };
        const double r2 = integrate(f, 0.0, 1.0, 1e-12);
        if (r2 <= 0) continue;
        lt.push_back(std::log(t));
        lr.push_back(std::log(r2));
    }
    if (lt.size() < 2) throw ConfigError("remainder model: empty R2");
    // Least-squares slope.
    double mx = 0, my = 0;
    for (size_t i = 0; i < lt.size(); ++i) {
        mx += lt[i];
        my += lr[i];
    }
    mx /= static_cast<double>(lt.size());
    my /= static_cast<double>(lt.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < lt.size(); ++i) {
        num += (lt[i] - mx) * (lr[i] - my);
        den += (lt[i] - mx) * (lt[i] - mx);
    }
    return num / den;
}

double remainder_exponent_model(double rho, const std::vector<double>& t_grid) {
    const double a = -1.0 / (1.0 + rho) + 0.01;
    return remainder_exponent_model(
        rho, [a](double s) { return s > 0 ? std::pow(s, a) : 0.0; }, t_grid);
}

} // namespace mmheat
