#include "mmheat/rays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <variant>

#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec2 xy(const Vec3& v) { return {v.x, v.y}; }
Vec3 lift(const Vec2& v) { return {v.x, v.y, 0.0}; }

// ---------------------------------------------------------------------------
// 2D boundary features: circle arcs (domain inside), straight edges with
// inward normal, and reflex-corner fans.

struct CircleFeature {
    Vec2 center;
    double R = 0;
};

struct EdgeFeature {
    Vec2 a, b;
    Vec2 n; // inward unit normal
};

struct CornerFeature {
    Vec2 v;
    double th0 = 0, dth = 0; // fan directions th0 .. th0+dth
};

struct FeatureSet {
    std::vector<CircleFeature> circles;
    std::vector<EdgeFeature> edges;
    std::vector<CornerFeature> corners;
    double smax = 0; // ray length cap
    bool has_convex_corner = false;
};

std::vector<Vec2> shape_vertices(const DomainSpec& spec) {
    if (const auto* r = std::get_if<Rect>(&spec.shape)) {
        return {r->origin, r->origin + Vec2{r->width, 0.0},
                r->origin + Vec2{r->width, r->height},
                r->origin + Vec2{0.0, r->height}};
    }
    if (const auto* pg = std::get_if<Polygon>(&spec.shape)) return pg->vertices;
    throw UnsupportedShape("polygon features need a rect or polygon");
}

// Fan of directions around a vertex for which the vertex is the nearest
// boundary point; empty at convex corners (the wedge falls outside Omega).
void add_corner(const DomainSpec& domain, const Vec2& u, const Vec2& v,
                const Vec2& w, double probe, FeatureSet& fs) {
    const Vec2 e1 = (v - u).normalized();
    const Vec2 e2 = (w - v).normalized();
    Vec2 c1 = e1.rot90();
    if (c1.dot(e2) > 0) c1 = c1 * -1.0;
    Vec2 c2 = e2.rot90();
    if (c2.dot(e1) < 0) c2 = c2 * -1.0;
    const double th0 = std::atan2(c1.y, c1.x);
    double dth = std::atan2(c2.y, c2.x) - th0;
    while (dth < 0) dth += 2 * M_PI;
    while (dth >= 2 * M_PI) dth -= 2 * M_PI;
    if (dth < 1e-9) return;
    const Vec2 dm{std::cos(th0 + dth / 2), std::sin(th0 + dth / 2)};
    const bool wedge_ok = dm.dot(e1) >= -1e-9 && dm.dot(e2) <= 1e-9;
    if (!wedge_ok || !contains(domain, v + dm * probe)) {
        fs.has_convex_corner = true;
        return;
    }
    fs.corners.push_back({v, th0, dth});
}

void add_polygon_features(const DomainSpec& domain, const std::vector<Vec2>& v,
                          double probe, FeatureSet& fs) {
    const size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = v[i], b = v[(i + 1) % n];
        const Vec2 dir = (b - a).normalized();
        Vec2 nrm = dir.rot90();
        const Vec2 mid = (a + b) * 0.5;
        if (!contains(domain, mid + nrm * probe)) nrm = nrm * -1.0;
        fs.edges.push_back({a, b, nrm});
        add_corner(domain, v[(i + n - 1) % n], v[i], v[(i + 1) % n], probe, fs);
    }
}

FeatureSet build_features(const DomainSpec& spec) {
    FeatureSet fs;
    const BBox bb = bounding_box(spec);
    fs.smax = dist(bb.lo, bb.hi) + 1.0;
    const double probe = 1e-7 * fs.smax;
    if (const auto* d = std::get_if<Disk>(&spec.shape)) {
        fs.circles.push_back({d->center, d->radius});
    } else if (std::holds_alternative<Rect>(spec.shape) ||
               std::holds_alternative<Polygon>(spec.shape)) {
        add_polygon_features(spec, shape_vertices(spec), probe, fs);
    } else if (const auto* df = std::get_if<Difference>(&spec.shape)) {
        if (!df->slits.empty())
            throw UnsupportedShape("planar slit domains have no ray model");
        if (const auto* od = std::get_if<Disk>(&df->outer->shape))
            fs.circles.push_back({od->center, od->radius});
        else
            throw UnsupportedShape("difference outer must be a disk");
        for (const auto& rm : df->removed)
            add_polygon_features(spec, shape_vertices(*rm), probe, fs);
    } else {
        throw UnsupportedShape("no ray construction for this shape");
    }
    return fs;
}

// sup{s : delta(foot + s dir) >= s}; the predicate is monotone because delta
// is 1-Lipschitz along the ray.
double ray_length_generic(const std::function<double(double)>& delta_at,
                          double smax) {
    const auto ok = [&](double s) { return delta_at(s) >= s - 1e-11; };
    if (ok(smax)) return smax;
    double lo = 0.0, hi = smax;
    for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (lo + hi);
        (ok(m) ? lo : hi) = m;
    }
    return lo;
}

double ray_length2(const DomainSpec& spec, const Vec2& foot, const Vec2& dir,
                   double smax) {
    return ray_length_generic(
        [&](double s) { return signed_distance_exact(spec, foot + dir * s); },
        smax);
}

// ---------------------------------------------------------------------------
// 3D ball-minus-slits geometry.

struct SlitBall {
    double l = 0; // slit half-length
};

bool is_slit_ball(const DomainSpec& spec) {
    const auto* df = std::get_if<Difference>(&spec.shape);
    return df && spec.ambient_dim == 3 && !df->slits.empty();
}

SlitBall slit_ball_params(const DomainSpec& spec) {
    const auto& df = std::get<Difference>(spec.shape);
    double l = 0;
    for (const auto& sl : df.slits)
        l = std::max({l, std::abs(sl.a.x), std::abs(sl.a.y), std::abs(sl.b.x),
                      std::abs(sl.b.y)});
    return {l};
}

double delta3(const SlitBall& sb, const Vec3& p) {
    const double dsph = 1.0 - norm(p);
    const double dx = std::hypot(std::max(std::abs(p.x) - sb.l, 0.0),
                                 std::hypot(p.y, p.z));
    const double dy = std::hypot(std::max(std::abs(p.y) - sb.l, 0.0),
                                 std::hypot(p.x, p.z));
    return std::min({dsph, dx, dy});
}

double ray_length3(const SlitBall& sb, const Vec3& foot, const Vec3& dir) {
    return ray_length_generic(
        [&](double s) { return delta3(sb, foot + dir * s); }, 2.0);
}

RayDecomposition decompose_slit_ball(const DomainSpec& spec, int n) {
    const SlitBall sb = slit_ball_params(spec);
    RayDecomposition d;
    d.domain = spec;
    const int n_s = std::max(64, n / 2);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < n_s; ++j) {
        const double z = 1.0 - 2.0 * (j + 0.5) / n_s;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double ph = golden * j;
        TransportRay ray;
        ray.foot = {r * std::cos(ph), r * std::sin(ph), z};
        ray.dir = ray.foot * -1.0;
        ray.family = RayFamily::sphere;
        ray.dens_a = 1;
        ray.dens_b = -1;
        ray.dens_p = 2;
        ray.weight = 4.0 * M_PI / n_s;
        ray.inner_length = ray_length3(sb, ray.foot, ray.dir);
        d.rays.push_back(ray);
    }
    // Spherical fans at the four slit endpoints: directions with a positive
    // component along the outward slit axis, transverse element s^2 dOmega.
    const int n_e = std::max(64, n / 16);
    for (int axis = 0; axis < 2; ++axis) {
        for (double sign : {-1.0, 1.0}) {
            const Vec3 end = axis == 0 ? Vec3{sign * sb.l, 0, 0}
                                       : Vec3{0, sign * sb.l, 0};
            const Vec3 out = axis == 0 ? Vec3{sign, 0, 0} : Vec3{0, sign, 0};
            std::vector<Vec3> dirs;
            for (int j = 0; j < 2 * n_e; ++j) {
                const double z = 1.0 - 2.0 * (j + 0.5) / (2 * n_e);
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double ph = golden * j;
                const Vec3 u{r * std::cos(ph), r * std::sin(ph), z};
                if (dot(u, out) > 0) dirs.push_back(u);
            }
            for (const Vec3& u : dirs) {
                TransportRay ray;
                ray.foot = end;
                ray.dir = u;
                ray.family = RayFamily::slit;
                ray.dens_a = 0;
                ray.dens_b = 1;
                ray.dens_p = 2;
                ray.weight = 2.0 * M_PI / static_cast<double>(dirs.size());
                ray.inner_length = ray_length3(sb, ray.foot, ray.dir);
                d.rays.push_back(ray);
            }
        }
    }
    const int n_x = std::max(64, n / 8);
    const int n_phi = 16;
    for (int axis = 0; axis < 2; ++axis) {
        for (int j = 0; j < n_x; ++j) {
            const double x0 = -sb.l + (j + 0.5) * 2.0 * sb.l / n_x;
            for (int k = 0; k < n_phi; ++k) {
                const double ph = (k + 0.5) * 2.0 * M_PI / n_phi;
                TransportRay ray;
                if (axis == 0) {
                    ray.foot = {x0, 0, 0};
                    ray.dir = {0, std::cos(ph), std::sin(ph)};
                } else {
                    ray.foot = {0, x0, 0};
                    ray.dir = {std::cos(ph), 0, std::sin(ph)};
                }
                ray.family = RayFamily::slit;
                ray.dens_a = 0;
                ray.dens_b = 1;
                ray.dens_p = 1;
                ray.weight = (2.0 * sb.l / n_x) * (2.0 * M_PI / n_phi);
                ray.inner_length = ray_length3(sb, ray.foot, ray.dir);
                d.rays.push_back(ray);
            }
        }
    }
    for (const auto& r : d.rays) d.total_weight += r.weight;
    return d;
}

// ---------------------------------------------------------------------------
// Ray through an interior 2D point: nearest feature, parameter, total length
// and the density log-derivative there.

struct RayThrough {
    double value = 0; // [lap delta]^reg
    double s = 0;     // = delta(x)
    double length = 0;
    Vec2 foot;
    Vec2 dir;
};

RayThrough ray_through(const DomainSpec& spec, const FeatureSet& fs,
                       const Vec2& x, double ridge_tol) {
    if (signed_distance_exact(spec, x) <= 0)
        throw ConfigError("ray evaluation needs an interior point");
    double best = kInf, value = 0;
    Vec2 foot;
    for (const auto& c : fs.circles) {
        const double rad = dist(x, c.center);
        if (rad < ridge_tol) throw OnCutLocus("point lies on the cut locus");
        const double dd = c.R - rad;
        if (dd < best) {
            best = dd;
            value = -1.0 / rad;
            foot = c.center + (x - c.center) * (c.R / rad);
        }
    }
    for (const auto& e : fs.edges) {
        const Vec2 ab = e.b - e.a;
        const double t =
            std::clamp((x - e.a).dot(ab) / ab.norm2(), 0.0, 1.0);
        const Vec2 q = e.a + ab * t;
        const double dd = dist(x, q);
        if (dd < best) {
            best = dd;
            value = 0.0;
            foot = q;
        }
    }
    for (const auto& c : fs.corners) {
        const double dd = dist(x, c.v);
        if (dd >= best || dd < 1e-300) continue;
        const double th = std::atan2(x.y - c.v.y, x.x - c.v.x);
        double rel = th - c.th0;
        while (rel < 0) rel += 2 * M_PI;
        if (rel <= c.dth + 1e-9) {
            best = dd;
            value = 1.0 / dd;
            foot = c.v;
        }
    }
    RayThrough rt;
    rt.s = best;
    rt.value = value;
    rt.foot = foot;
    rt.dir = (x - foot) / best;
    // A pure disk has exact radial rays; elsewhere bisect the ridge.
    if (const auto* dsk = std::get_if<Disk>(&spec.shape))
        rt.length = dsk->radius;
    else
        rt.length = ray_length2(spec, foot, rt.dir, fs.smax);
    if (rt.s >= rt.length - ridge_tol) throw OnCutLocus("point lies on the cut locus");
    return rt;
}

double simpson_ray(const TransportRay& r,
                   const std::function<double(const Vec3&)>& f, int n) {
    const double L = r.inner_length;
    if (L <= 0) return 0.0;
    const double hs = L / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = i * hs;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * f(r.point(s)) * r.density(s);
    }
    return acc * hs / 3.0;
}

} // namespace

RayDecomposition decompose(const DomainSpec& spec, int n_rays) {
    if (n_rays < 64) throw ConfigError("ray decomposition needs >= 64 rays");
    if (is_slit_ball(spec)) return decompose_slit_ball(spec, n_rays);
    if (const auto* iv = std::get_if<Interval>(&spec.shape)) {
        RayDecomposition d;
        d.domain = spec;
        const double half = 0.5 * (iv->b - iv->a);
        for (int side = 0; side < 2; ++side) {
            TransportRay ray;
            ray.foot = {side == 0 ? iv->a : iv->b, 0, 0};
            ray.dir = {side == 0 ? 1.0 : -1.0, 0, 0};
            ray.inner_length = half;
            ray.weight = 1.0;
            ray.family = RayFamily::edge;
            d.rays.push_back(ray);
        }
        d.total_weight = 2.0;
        return d;
    }

    const FeatureSet fs = build_features(spec);
    const bool pure_disk = std::holds_alternative<Disk>(spec.shape);
    double total_len = 0;
    for (const auto& c : fs.circles) total_len += 2 * M_PI * c.R;
    for (const auto& e : fs.edges) total_len += dist(e.a, e.b);

    RayDecomposition d;
    d.domain = spec;
    for (const auto& c : fs.circles) {
        const int nc = std::max(
            16, static_cast<int>(std::lround(n_rays * 2 * M_PI * c.R / total_len)));
        for (int j = 0; j < nc; ++j) {
            const double th = 2 * M_PI * (j + 0.5) / nc;
            const Vec2 u{std::cos(th), std::sin(th)};
            TransportRay ray;
            ray.foot = lift(c.center + u * c.R);
            ray.dir = lift(u * -1.0);
            ray.dens_a = 1;
            ray.dens_b = -1.0 / c.R;
            ray.dens_p = 1;
            ray.weight = 2 * M_PI * c.R / nc;
            ray.family = RayFamily::circle;
            ray.inner_length =
                pure_disk ? c.R
                          : ray_length2(spec, xy(ray.foot), xy(ray.dir), fs.smax);
            d.rays.push_back(ray);
        }
    }
    for (const auto& e : fs.edges) {
        const double len = dist(e.a, e.b);
        const int ne =
            std::max(8, static_cast<int>(std::lround(n_rays * len / total_len)));
        for (int j = 0; j < ne; ++j) {
            const double t = (j + 0.5) / ne;
            TransportRay ray;
            ray.foot = lift(e.a + (e.b - e.a) * t);
            ray.dir = lift(e.n);
            ray.dens_p = 0;
            ray.weight = len / ne;
            ray.family = RayFamily::edge;
            ray.inner_length = ray_length2(spec, xy(ray.foot), xy(ray.dir), fs.smax);
            d.rays.push_back(ray);
        }
    }
    for (const auto& c : fs.corners) {
        const int nf = std::max(16, n_rays / 32);
        for (int j = 0; j < nf; ++j) {
            const double th = c.th0 + c.dth * (j + 0.5) / nf;
            TransportRay ray;
            ray.foot = lift(c.v);
            ray.dir = {std::cos(th), std::sin(th), 0};
            ray.dens_a = 0;
            ray.dens_b = 1;
            ray.dens_p = 1;
            ray.weight = c.dth / nf;
            ray.family = RayFamily::corner_fan;
            ray.inner_length = ray_length2(spec, xy(ray.foot), xy(ray.dir), fs.smax);
            d.rays.push_back(ray);
        }
    }
    for (const auto& r : d.rays) d.total_weight += r.weight;
    return d;
}

double reconstruct(const RayDecomposition& d,
                   const std::function<double(const Vec3&)>& f) {
    double acc = 0.0;
    for (const auto& r : d.rays) acc += r.weight * simpson_ray(r, f, 32);
    return acc;
}

double laplacian_delta_reg(const RayDecomposition& d, const Vec2& x,
                           double ridge_tol) {
    if (is_slit_ball(d.domain))
        throw UnsupportedShape("pointwise ray evaluation is planar only");
    const FeatureSet fs = build_features(d.domain);
    return ray_through(d.domain, fs, x, ridge_tol).value;
}

double s_kappa(double kappa, double theta) {
    if (kappa > 0) return std::sin(theta * std::sqrt(kappa)) / std::sqrt(kappa);
    if (kappa < 0) return std::sinh(theta * std::sqrt(-kappa)) / std::sqrt(-kappa);
    return theta;
}

double s_kappa_prime(double kappa, double theta) {
    if (kappa > 0) return std::cos(theta * std::sqrt(kappa));
    if (kappa < 0) return std::cosh(theta * std::sqrt(-kappa));
    return 1.0;
}

double j_kappa(double kappa) { return kappa > 0 ? M_PI / std::sqrt(kappa) : kInf; }

ComparisonReport comparison_check(const RayDecomposition& d, double kappa,
                                  double N, const std::vector<Vec2>& samples) {
    const FeatureSet fs = build_features(d.domain);
    ComparisonReport rep;
    for (const Vec2& x : samples) {
        RayThrough rt;
        try {
            rt = ray_through(d.domain, fs, x, 1e-9);
        } catch (const OnCutLocus&) {
            ++rep.skipped;
            continue;
        }
        ++rep.checked;
        const double da = rt.length - rt.s;
        const double db = rt.s; // outer endpoint is the foot itself
        const double lo =
            da > 0 ? -(N - 1) * s_kappa_prime(kappa, da) / s_kappa(kappa, da)
                   : -kInf;
        const double hi =
            db > 0 ? (N - 1) * s_kappa_prime(kappa, db) / s_kappa(kappa, db)
                   : kInf;
        const double excess = std::max(lo - rt.value, rt.value - hi);
        rep.worst_excess = std::max(rep.worst_excess, excess);
        if (excess > 1e-9) ++rep.violations;
    }
    return rep;
}

IgcReport migc_check(const DomainSpec& spec, double eps, int n_samples) {
    if (!(eps > 0)) throw ConfigError("migc_check needs eps > 0");
    const RayDecomposition d = decompose(spec, n_samples);
    IgcReport rep;
    double short_w = 0;
    for (const auto& r : d.rays)
        if (r.inner_length < eps) short_w += r.weight;
    rep.short_ray_fraction = short_w / d.total_weight;
    rep.migc = rep.short_ray_fraction <= 1e-9;

    if (const auto* dk = std::get_if<Disk>(&spec.shape)) {
        rep.interior_ball = eps <= dk->radius;
        rep.exterior_ball = true;
    } else if (std::holds_alternative<Rect>(spec.shape) ||
               std::holds_alternative<Polygon>(spec.shape)) {
        const FeatureSet fs = build_features(spec);
        rep.interior_ball = !fs.has_convex_corner;
        rep.exterior_ball = fs.corners.empty();
    } else if (std::holds_alternative<Interval>(spec.shape)) {
        const auto& iv = std::get<Interval>(spec.shape);
        rep.interior_ball = eps <= 0.5 * (iv.b - iv.a);
        rep.exterior_ball = true;
    } else if (is_slit_ball(spec)) {
        rep.interior_ball = true;  // tangent balls exist, if only at z = 0
        rep.exterior_ball = false; // slits have no complement volume
    } else {
        // Disk minus polygon: reflex corners block the exterior ball; the
        // interior ball radius is limited by half the smallest clearance.
        rep.interior_ball = eps <= 0.5 * min_feature_size(spec);
        rep.exterior_ball = false;
    }
    return rep;
}

HalphaReport halpha_l1_bound(const RayDecomposition& d, double eps) {
    double short_w = 0;
    for (const auto& r : d.rays)
        if (r.inner_length < eps) short_w += r.weight;
    if (short_w / d.total_weight > 1e-9)
        throw MigcViolated("rays shorter than eps carry positive mass");
    HalphaReport rep;
    rep.bounded = true;
    for (const auto& r : d.rays) {
        const double E = std::min(eps, r.inner_length);
        // Monotone density: total variation is the endpoint difference, and
        // |dlog| h integrates to the same quantity.
        const double var = std::abs(r.density(E) - r.density(0.0));
        rep.max_h_prime_l1 = std::max(rep.max_h_prime_l1, var);
        rep.band_l1_laplacian += r.weight * var;
    }
    return rep;
}

double lp_norm_laplacian(const RayDecomposition& d, double eps, double p) {
    if (!(p >= 1)) throw ConfigError("lp norm needs p >= 1");
    double total = 0;
    for (const auto& r : d.rays) {
        if (r.dens_p == 0 || r.dens_b == 0) continue;
        const double E = std::min(eps, r.inner_length);
        if (E <= 0) continue;
        const double q = r.dens_p - p;
        const double c = std::pow(std::abs(r.dens_p * r.dens_b), p);
        const double end = r.dens_a + r.dens_b * E;
        // integrand c (a + b s)^q; divergence when the density zero enters
        // the closed band with q <= -1.
        if (q <= -1.0) {
            if (r.dens_a <= 1e-14 || end <= 1e-14) return kInf;
        }
        double integral;
        if (std::abs(q + 1.0) < 1e-12)
            integral = (std::log(end) - std::log(r.dens_a)) / r.dens_b;
        else
            integral = (std::pow(end, q + 1) - std::pow(r.dens_a, q + 1)) /
                       (r.dens_b * (q + 1));
        total += r.weight * c * integral;
    }
    return std::pow(total, 1.0 / p);
}

CoverageReport foot_map_surjectivity(const RayDecomposition& d, double eps,
                                     const std::vector<Vec3>& boundary_points,
                                     double tol) {
    std::vector<const TransportRay*> rays;
    for (const auto& r : d.rays) rays.push_back(&r);
    if (tol <= 0) {
        // 4x the typical spacing between neighboring feet.
        double worst = 0;
        for (size_t i = 0; i < rays.size(); ++i) {
            double nn = kInf;
            for (size_t j = 0; j < rays.size(); ++j) {
                if (i == j) continue;
                const double dd = norm(rays[i]->foot - rays[j]->foot);
                if (dd > 1e-12) nn = std::min(nn, dd);
            }
            if (nn < kInf) worst = std::max(worst, nn);
        }
        tol = 4.0 * worst;
    }
    CoverageReport rep;
    rep.covered = true;
    for (const Vec3& q : boundary_points) {
        double gap = kInf, near_w = 0, near_short = 0;
        for (const auto* r : rays) {
            const double dd = norm(q - r->foot);
            if (r->inner_length >= eps) gap = std::min(gap, dd);
            if (dd <= tol) {
                near_w += r->weight;
                if (r->inner_length < eps) near_short += r->weight;
            }
        }
        rep.max_gap = std::max(rep.max_gap, std::min(gap, 10 * tol));
        if (gap > tol || (near_w > 0 && near_short / near_w > 1e-6))
            rep.covered = false;
    }
    return rep;
}

std::vector<Vec3> boundary_samples(const DomainSpec& spec, int n) {
    std::vector<Vec3> out;
    if (is_slit_ball(spec)) {
        const SlitBall sb = slit_ball_params(spec);
        const int ns = n / 2, nsl = n / 4;
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < ns; ++j) {
            const double z = 1.0 - 2.0 * (j + 0.5) / ns;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            out.push_back({r * std::cos(golden * j), r * std::sin(golden * j), z});
        }
        for (int j = 0; j < nsl; ++j) {
            const double x0 = -sb.l + (j + 0.5) * 2 * sb.l / nsl;
            out.push_back({x0, 0, 0});
            out.push_back({0, x0, 0});
        }
        return out;
    }
    const FeatureSet fs = build_features(spec);
    double total_len = 0;
    for (const auto& c : fs.circles) total_len += 2 * M_PI * c.R;
    for (const auto& e : fs.edges) total_len += dist(e.a, e.b);
    for (const auto& c : fs.circles) {
        const int nc = std::max(8, static_cast<int>(n * 2 * M_PI * c.R / total_len));
        for (int j = 0; j < nc; ++j) {
            const double th = 2 * M_PI * (j + 0.5) / nc;
            out.push_back(lift(c.center + Vec2{std::cos(th), std::sin(th)} * c.R));
        }
    }
    for (const auto& e : fs.edges) {
        const int ne =
            std::max(4, static_cast<int>(n * dist(e.a, e.b) / total_len));
        for (int j = 0; j < ne; ++j)
            out.push_back(lift(e.a + (e.b - e.a) * ((j + 0.5) / ne)));
    }
    return out;
}

double uncovered_band_fraction(const DomainSpec& spec, double eps,
                               int n_samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int in_band = 0, uncovered = 0;

    if (is_slit_ball(spec)) {
        const SlitBall sb = slit_ball_params(spec);
        while (in_band < n_samples) {
            const Vec3 p{2 * uni(rng) - 1, 2 * uni(rng) - 1, 2 * uni(rng) - 1};
            const double del = delta3(sb, p);
            if (del <= 0 || del >= eps) continue;
            ++in_band;
            // Foot on the nearest feature, ray extended through p.
            Vec3 foot;
            const double dsph = 1.0 - norm(p);
            const double rx = std::hypot(p.y, p.z);
            const double ry = std::hypot(p.x, p.z);
            const double dx = std::hypot(std::max(std::abs(p.x) - sb.l, 0.0), rx);
            const double dy = std::hypot(std::max(std::abs(p.y) - sb.l, 0.0), ry);
            if (dsph <= dx && dsph <= dy)
                foot = p * (1.0 / norm(p));
            else if (dx <= dy)
                foot = {std::clamp(p.x, -sb.l, sb.l), 0, 0};
            else
                foot = {0, std::clamp(p.y, -sb.l, sb.l), 0};
            const Vec3 dir = (p - foot) * (1.0 / norm(p - foot));
            if (ray_length3(sb, foot, dir) < eps) ++uncovered;
        }
        return static_cast<double>(uncovered) / n_samples;
    }

    const FeatureSet fs = build_features(spec);
    const BBox bb = bounding_box(spec);
    while (in_band < n_samples) {
        const Vec2 p{bb.lo.x + uni(rng) * (bb.hi.x - bb.lo.x),
                     bb.lo.y + uni(rng) * (bb.hi.y - bb.lo.y)};
        const double del = signed_distance_exact(spec, p);
        if (del <= 0 || del >= eps) continue;
        ++in_band;
        try {
            const RayThrough rt = ray_through(spec, fs, p, 1e-12);
            if (rt.length < eps) ++uncovered;
        } catch (const OnCutLocus&) {
            // ridge points are measure zero; count as covered
        }
    }
    return static_cast<double>(uncovered) / n_samples;
}

} // namespace mmheat
