#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mmheat/domain.hpp"

namespace mmheat {

// Rays live in 2D or 3D; z stays 0 for planar domains.
struct Vec3 {
    double x = 0, y = 0, z = 0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Vec3 operator*(const Vec3& a, double c) {
    return {a.x * c, a.y * c, a.z * c};
}
inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

enum class RayFamily { circle, edge, corner_fan, sphere, slit };

// Maximal distance-minimizing segment from a boundary foot point inward;
// the parameter s equals the boundary distance along the ray. The
// disintegration density is (dens_a + dens_b * s)^dens_p, normalized to the
// natural transverse element of its family (1 at the foot for codimension-1
// feet, ~s for fans around a corner, ~s around a slit in 3D).
struct TransportRay {
    Vec3 foot;
    Vec3 dir; // unit, inward
    double inner_length = 0;
    double outer_length = 0;
    double dens_a = 1, dens_b = 0;
    int dens_p = 0;
    double weight = 0; // physical quotient weight (arc length / angle / area)
    RayFamily family = RayFamily::edge;

    double density(double s) const { return std::pow(dens_a + dens_b * s, dens_p); }
    double dlog(double s) const {
        return dens_p == 0 ? 0.0 : dens_p * dens_b / (dens_a + dens_b * s);
    }
    Vec3 point(double s) const { return foot + dir * s; }
    Vec3 endpoint_a() const { return point(inner_length); }
    Vec3 endpoint_b() const { return foot - dir * outer_length; }
};

struct RayDecomposition {
    std::vector<TransportRay> rays;
    DomainSpec domain;
    // q is a probability measure; rays keep physical weights, so quadrature
    // against q divides by total_weight while densities absorb the scale.
    std::string normalization = "probability quotient, physical per-ray weights";
    double total_weight = 0;
};

// Analytic ray construction per shape family (circle arcs, edge strips,
// reflex-corner fans; sphere plus slit fans for the 3D slit domain).
RayDecomposition decompose(const DomainSpec& spec, int n_rays);

// Disintegration quadrature: sum_rays w int f(gamma(s)) h(s) ds.
double reconstruct(const RayDecomposition& d,
                   const std::function<double(const Vec3&)>& f);

// Regular part of the distributional Laplacian of delta at x, evaluated from
// the density of the ray through x; sign calibrated to the classical
// Laplacian (unit disk: -1/|x|). Throws OnCutLocus near the ridge.
double laplacian_delta_reg(const RayDecomposition& d, const Vec2& x,
                           double ridge_tol = 1e-6);

// Model functions of the curvature-dimension comparison.
double s_kappa(double kappa, double theta);
double s_kappa_prime(double kappa, double theta);
double j_kappa(double kappa);

struct ComparisonReport {
    int checked = 0;
    int skipped = 0; // cut-locus samples
    int violations = 0;
    double worst_excess = 0;
};

// Verifies -(N-1) s'/s(d_a) <= [lap delta]^reg <= (N-1) s'/s(d_b) at the
// samples, with d_a, d_b the distances to the ray endpoints.
ComparisonReport comparison_check(const RayDecomposition& d, double kappa,
                                  double N, const std::vector<Vec2>& samples);

struct IgcReport {
    bool migc = false;
    bool interior_ball = false;
    bool exterior_ball = false;
    double short_ray_fraction = 0; // q-mass of rays shorter than eps
};

// mIGC decided by the ray-length criterion (q-mass of short rays below
// 1e-9); ball conditions decided analytically per family.
IgcReport migc_check(const DomainSpec& spec, double eps, int n_samples = 4096);

struct HalphaReport {
    double max_h_prime_l1 = 0;       // max over rays, unit-normalized density
    double band_l1_laplacian = 0;    // int_{0<delta<eps} |[lap delta]^reg| dm
    bool bounded = false;
};

HalphaReport halpha_l1_bound(const RayDecomposition& d, double eps);

// L^p norm of [lap delta]^reg on the band {0 < delta < eps}; +infinity when
// the closed-form ray integral diverges.
double lp_norm_laplacian(const RayDecomposition& d, double eps, double p);

struct CoverageReport {
    double max_gap = 0;
    bool covered = false;
};

// Checks every boundary sample sits near the foot of a ray of inner length
// at least eps. tol = 0 picks 4x the mean foot spacing.
CoverageReport foot_map_surjectivity(const RayDecomposition& d, double eps,
                                     const std::vector<Vec3>& boundary_points,
                                     double tol = 0);

std::vector<Vec3> boundary_samples(const DomainSpec& spec, int n);

// Monte-Carlo estimate of the band fraction not covered by eps-long rays;
// the direct counterpart of the ray-length criterion.
double uncovered_band_fraction(const DomainSpec& spec, double eps,
                               int n_samples, unsigned seed = 1);

} // namespace mmheat
