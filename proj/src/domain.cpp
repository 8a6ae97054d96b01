#include "mmheat/domain.hpp"

#include <cmath>
#include <limits>

#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double polygon_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % v.size()];
        a += p.cross(q);
    }
    return 0.5 * a;
}

bool polygon_simple(const std::vector<Vec2>& v) {
    const size_t n = v.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            // Skip adjacent edges (they share a vertex).
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

bool polygon_contains(const std::vector<Vec2>& v, const Vec2& p) {
    // Crossing number; points on the boundary are treated as outside the
    // open set (distance 0 makes the sign irrelevant there).
    bool inside = false;
    const size_t n = v.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const bool cross = (v[i].y > p.y) != (v[j].y > p.y);
        if (cross) {
            const double xint =
                v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

double polygon_boundary_distance(const std::vector<Vec2>& v, const Vec2& p) {
    double d = kInf;
    const size_t n = v.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++)
        d = std::min(d, segment_distance(p, v[j], v[i]));
    return d;
}

// Coarse boundary sampling, used only for feature-size clearances.
std::vector<Vec2> sample_boundary(const DomainSpec& spec, int n);

} // namespace

void validate(const DomainSpec& spec) {
    if (const auto* d = std::get_if<Disk>(&spec.shape)) {
        if (!(d->radius > 0.0)) throw ConfigError("disk radius must be positive");
    } else if (const auto* r = std::get_if<Rect>(&spec.shape)) {
        if (!(r->width > 0.0 && r->height > 0.0))
            throw ConfigError("rect sides must be positive");
    } else if (const auto* pg = std::get_if<Polygon>(&spec.shape)) {
        if (!polygon_simple(pg->vertices))
            throw ConfigError("polygon must be simple with >= 3 vertices");
        if (polygon_area(pg->vertices) <= 0.0)
            throw ConfigError("polygon vertices must be counterclockwise");
    } else if (const auto* iv = std::get_if<Interval>(&spec.shape)) {
        if (!(iv->b > iv->a)) throw ConfigError("interval must have b > a");
    } else if (const auto* df = std::get_if<Difference>(&spec.shape)) {
        if (!df->outer) throw ConfigError("difference needs an outer shape");
        validate(*df->outer);
        for (const auto& rm : df->removed) {
            validate(*rm);
            // The removal must lie within the closure of the outer shape:
            // every sampled boundary point of the removal is inside or on it.
            for (const Vec2& q : sample_boundary(*rm, 64)) {
                if (!contains(*df->outer, q) &&
                    boundary_distance(*df->outer, q) > 1e-12)
                    throw ConfigError("removed shape sticks out of the outer shape");
            }
        }
    }
}

double continuum_measure(const DomainSpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return M_PI * s.radius * s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return s.width * s.height;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return polygon_area(s.vertices);
            } else if constexpr (std::is_same_v<T, Interval>) {
                return s.b - s.a;
            } else {
                double m = continuum_measure(*s.outer);
                for (const auto& rm : s.removed) m -= continuum_measure(*rm);
                return m; // slits are measure zero
            }
        },
        spec.shape);
}

double continuum_perimeter(const DomainSpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return 2.0 * M_PI * s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return 2.0 * (s.width + s.height);
            } else if constexpr (std::is_same_v<T, Polygon>) {
                double p = 0.0;
                const auto& v = s.vertices;
                for (size_t i = 0; i < v.size(); ++i)
                    p += dist(v[i], v[(i + 1) % v.size()]);
                return p;
            } else if constexpr (std::is_same_v<T, Interval>) {
                return 2.0; // counting measure of the two endpoints
            } else {
                // Removals are strictly interior, so their perimeters add.
                // Slits are excluded from the measure-theoretic boundary.
                double p = continuum_perimeter(*s.outer);
                for (const auto& rm : s.removed) p += continuum_perimeter(*rm);
                return p;
            }
        },
        spec.shape);
}

bool contains(const DomainSpec& spec, const Vec2& p) {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return dist(p, s.center) < s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return p.x > s.origin.x && p.x < s.origin.x + s.width &&
                       p.y > s.origin.y && p.y < s.origin.y + s.height;
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return polygon_contains(s.vertices, p);
            } else if constexpr (std::is_same_v<T, Interval>) {
                return p.x > s.a && p.x < s.b;
            } else {
                if (!contains(*s.outer, p)) return false;
                for (const auto& rm : s.removed) {
                    if (contains(*rm, p) || boundary_distance(*rm, p) == 0.0)
                        return false;
                }
                return true;
            }
        },
        spec.shape);
}

double boundary_distance(const DomainSpec& spec, const Vec2& p) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return std::abs(s.radius - dist(p, s.center));
            } else if constexpr (std::is_same_v<T, Rect>) {
                const double dx =
                    std::max({s.origin.x - p.x, p.x - s.origin.x - s.width, 0.0});
                const double dy =
                    std::max({s.origin.y - p.y, p.y - s.origin.y - s.height, 0.0});
                if (dx > 0.0 || dy > 0.0) return std::hypot(dx, dy);
                // Inside: distance to the nearest side.
                return std::min({p.x - s.origin.x, s.origin.x + s.width - p.x,
                                 p.y - s.origin.y, s.origin.y + s.height - p.y});
            } else if constexpr (std::is_same_v<T, Polygon>) {
                return polygon_boundary_distance(s.vertices, p);
            } else if constexpr (std::is_same_v<T, Interval>) {
                return std::min(std::abs(p.x - s.a), std::abs(p.x - s.b));
            } else {
                double d = boundary_distance(*s.outer, p);
                for (const auto& rm : s.removed)
                    d = std::min(d, boundary_distance(*rm, p));
                for (const auto& sl : s.slits)
                    d = std::min(d, segment_distance(p, sl.a, sl.b));
                return d;
            }
        },
        spec.shape);
}

double signed_distance_exact(const DomainSpec& spec, const Vec2& p) {
    const double d = boundary_distance(spec, p);
    return contains(spec, p) ? d : -d;
}

namespace {

std::vector<Vec2> sample_boundary(const DomainSpec& spec, int n) {
    std::vector<Vec2> out;
    out.reserve(static_cast<size_t>(n));
    if (const auto* d = std::get_if<Disk>(&spec.shape)) {
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * i / n;
            out.push_back(d->center + Vec2{d->radius * std::cos(th),
                                           d->radius * std::sin(th)});
        }
    } else if (const auto* r = std::get_if<Rect>(&spec.shape)) {
        const std::vector<Vec2> corners = {
            r->origin,
            r->origin + Vec2{r->width, 0.0},
            r->origin + Vec2{r->width, r->height},
            r->origin + Vec2{0.0, r->height}};
        for (int side = 0; side < 4; ++side) {
            const Vec2 a = corners[side];
            const Vec2 b = corners[(side + 1) % 4];
            for (int i = 0; i < n / 4; ++i)
                out.push_back(a + (b - a) * (static_cast<double>(i) / (n / 4)));
        }
    } else if (const auto* pg = std::get_if<Polygon>(&spec.shape)) {
        const auto& v = pg->vertices;
        const int per_edge = std::max<int>(1, n / static_cast<int>(v.size()));
        for (size_t e = 0; e < v.size(); ++e) {
            const Vec2 a = v[e];
            const Vec2 b = v[(e + 1) % v.size()];
            for (int i = 0; i < per_edge; ++i)
                out.push_back(a + (b - a) * (static_cast<double>(i) / per_edge));
        }
    } else if (const auto* df = std::get_if<Difference>(&spec.shape)) {
        auto outer = sample_boundary(*df->outer, n);
        out.insert(out.end(), outer.begin(), outer.end());
        for (const auto& rm : df->removed) {
            auto inner = sample_boundary(*rm, n);
            out.insert(out.end(), inner.begin(), inner.end());
        }
    }
    return out;
}

} // namespace

double min_feature_size(const DomainSpec& spec) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return s.radius;
            } else if constexpr (std::is_same_v<T, Rect>) {
                return std::min(s.width, s.height);
            } else if constexpr (std::is_same_v<T, Polygon>) {
                double f = kInf;
                const auto& v = s.vertices;
                for (size_t i = 0; i < v.size(); ++i)
                    f = std::min(f, dist(v[i], v[(i + 1) % v.size()]));
                return f;
            } else if constexpr (std::is_same_v<T, Interval>) {
                return s.b - s.a;
            } else {
                double f = min_feature_size(*s.outer);
                for (const auto& rm : s.removed) {
                    f = std::min(f, min_feature_size(*rm));
                    // Clearance between the removal and the outer boundary.
                    for (const Vec2& q : sample_boundary(*rm, 256))
                        f = std::min(f, boundary_distance(*s.outer, q));
                }
                for (const auto& sl : s.slits) {
                    // A slit endpoint strictly inside the domain leaves a neck
                    // of that width; an endpoint on the boundary is a clean cut.
                    for (const Vec2& q : {sl.a, sl.b}) {
                        const double d = boundary_distance(*s.outer, q);
                        if (d > 1e-12 && contains(*s.outer, q)) f = std::min(f, d);
                    }
                }
                return f;
            }
        },
        spec.shape);
}

BBox bounding_box(const DomainSpec& spec) {
    return std::visit(
        [&](const auto& s) -> BBox {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disk>) {
                const Vec2 r{s.radius, s.radius};
                return {s.center - r, s.center + r};
            } else if constexpr (std::is_same_v<T, Rect>) {
                return {s.origin, s.origin + Vec2{s.width, s.height}};
            } else if constexpr (std::is_same_v<T, Polygon>) {
                BBox b{{kInf, kInf}, {-kInf, -kInf}};
                for (const Vec2& v : s.vertices) {
                    b.lo.x = std::min(b.lo.x, v.x);
                    b.lo.y = std::min(b.lo.y, v.y);
                    b.hi.x = std::max(b.hi.x, v.x);
                    b.hi.y = std::max(b.hi.y, v.y);
                }
                return b;
            } else if constexpr (std::is_same_v<T, Interval>) {
                return {{s.a, 0.0}, {s.b, 0.0}};
            } else {
                return bounding_box(*s.outer);
            }
        },
        spec.shape);
}

bool slit_crosses(const DomainSpec& spec, const Vec2& a, const Vec2& b) {
    if (const auto* df = std::get_if<Difference>(&spec.shape)) {
        for (const auto& sl : df->slits)
            if (segments_intersect(a, b, sl.a, sl.b)) return true;
        if (slit_crosses(*df->outer, a, b)) return true;
    }
    return false;
}

bool is_interval(const DomainSpec& spec) {
    return std::holds_alternative<Interval>(spec.shape);
}

DomainSpec make_disk(Vec2 center, double radius) {
    DomainSpec s;
    s.shape = Disk{center, radius};
    s.label = "disk";
    return s;
}

DomainSpec make_rect(Vec2 origin, double width, double height) {
    DomainSpec s;
    s.shape = Rect{origin, width, height};
    s.label = "rect";
    return s;
}

DomainSpec make_interval(double a, double b) {
    DomainSpec s;
    s.shape = Interval{a, b};
    s.ambient_dim = 1;
    s.label = "interval";
    return s;
}

DomainSpec make_polygon(std::vector<Vec2> vertices) {
    DomainSpec s;
    s.shape = Polygon{std::move(vertices)};
    s.label = "polygon";
    return s;
}

DomainSpec make_ball_minus_square(double ball_radius) {
    Difference d;
    d.outer = std::make_shared<DomainSpec>(
        make_disk(Vec2{0.5, 0.5}, ball_radius));
    d.removed.push_back(
        std::make_shared<DomainSpec>(make_rect(Vec2{0.0, 0.0}, 1.0, 1.0)));
    DomainSpec s;
    s.shape = std::move(d);
    s.label = "ball_minus_square";
    return s;
}

DomainSpec make_ball_minus_slits(double eps) {
    const double half = 1.0 - 4.0 * eps;
    if (half <= 0.0) throw ConfigError("ball_minus_slits needs eps < 1/4");
    Difference d;
    d.outer = std::make_shared<DomainSpec>(make_disk(Vec2{0.0, 0.0}, 1.0));
    d.slits.push_back(Slit{{-half, 0.0}, {half, 0.0}});
    d.slits.push_back(Slit{{0.0, -half}, {0.0, half}});
    DomainSpec s;
    s.shape = std::move(d);
    s.ambient_dim = 3;
    s.label = "ball_minus_slits";
    return s;
}

DomainSpec make_disk_minus_slits() {
    Difference d;
    d.outer = std::make_shared<DomainSpec>(make_disk(Vec2{0.0, 0.0}, 1.0));
    d.slits.push_back(Slit{{-1.0, 0.0}, {1.0, 0.0}});
    d.slits.push_back(Slit{{0.0, -1.0}, {0.0, 1.0}});
    DomainSpec s;
    s.shape = std::move(d);
    s.label = "disk_minus_slits";
    return s;
}

} // namespace mmheat
