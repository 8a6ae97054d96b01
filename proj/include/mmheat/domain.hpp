#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mmheat/geometry.hpp"

namespace mmheat {

struct DomainSpec;

struct Disk {
    Vec2 center;
    double radius = 1.0;
};

struct Rect {
    Vec2 origin;
    double width = 1.0;
    double height = 1.0;
};

// Simple polygon, vertices counterclockwise.
struct Polygon {
    std::vector<Vec2> vertices;
};

// 1D interval (a, b); the only shape with ambient dimension 1.
struct Interval {
    double a = 0.0;
    double b = 1.0;
};

// Codimension >= 1 segment removed from a domain. Carries zero measure and
// zero perimeter; it cuts connectivity and contributes to the signed distance.
struct Slit {
    Vec2 a;
    Vec2 b;
};

// Outer shape minus closed removed shapes and slits.
struct Difference {
    std::shared_ptr<const DomainSpec> outer;
    std::vector<std::shared_ptr<const DomainSpec>> removed;
    std::vector<Slit> slits;
};

struct DomainSpec {
    std::variant<Disk, Rect, Polygon, Interval, Difference> shape;
    int ambient_dim = 2;
    std::string label;
};

// Exact continuum quantities. Throws UnsupportedShape / ConfigError on
// invalid specs (non-positive sizes, self-intersecting polygons, removals
// sticking out of the outer shape).
void validate(const DomainSpec& spec);

double continuum_measure(const DomainSpec& spec);
double continuum_perimeter(const DomainSpec& spec);

// Open-set membership. Slits are measure zero and do not affect it.
bool contains(const DomainSpec& spec, const Vec2& p);

// Unsigned distance to the topological boundary (slits included).
double boundary_distance(const DomainSpec& spec, const Vec2& p);

// d(x, boundary) * (chi_Omega - chi_complement): positive inside.
double signed_distance_exact(const DomainSpec& spec, const Vec2& p);

// Smallest geometric feature: radii, side lengths, clearances between a
// removed piece and the enclosing boundary. Discretization demands
// h < feature / 8.
double min_feature_size(const DomainSpec& spec);

// Axis-aligned bounding box of the closure.
struct BBox {
    Vec2 lo;
    Vec2 hi;
};
BBox bounding_box(const DomainSpec& spec);

// True if any slit of the spec crosses the open segment (a, b).
bool slit_crosses(const DomainSpec& spec, const Vec2& a, const Vec2& b);

bool is_interval(const DomainSpec& spec);

// Stock domains used throughout the tests and the CLI.
DomainSpec make_disk(Vec2 center, double radius);
DomainSpec make_rect(Vec2 origin, double width, double height);
DomainSpec make_interval(double a, double b);
DomainSpec make_polygon(std::vector<Vec2> vertices);

// Large disk of the given radius centered at (0.5, 0.5) minus the closed
// unit square [0,1]^2. Satisfies mIGC for small eps but fails the exterior
// ball condition at the square corners.
DomainSpec make_ball_minus_square(double ball_radius = 10.0);

// Unit ball in R^3 minus two closed diameter slits of half-length
// 1 - 4*eps along the x and y axes. Never discretized; handled analytically
// by the ray machinery. Satisfies the eps-uniform interior ball condition
// but not mIGC.
DomainSpec make_ball_minus_slits(double eps);

// Unit disk minus two diameter slits (2D variant for measure/perimeter
// bookkeeping: slits are capacity null and change neither).
DomainSpec make_disk_minus_slits();

} // namespace mmheat
