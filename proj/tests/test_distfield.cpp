#include "doctest.h"

#include <cmath>

#include "mmheat/distfield.hpp"
#include "mmheat/domain.hpp"
#include "mmheat/grid.hpp"

using namespace mmheat;

TEST_CASE("marched field matches the exact formula on the square") {
    const DomainSpec sq = make_rect({0, 0}, 1, 1);
    const double h = 1.0 / 64;
    const WeightedGrid g = discretize(sq, h);
    const SignedDistanceField f = signed_distance_field(g);

    // Value at the cell nearest the center.
    int best = -1;
    double bd = 1e30;
    for (int c : g.inside_cells) {
        const double d = dist(g.cells[static_cast<size_t>(c)].center, {0.5, 0.5});
        if (d < bd) {
            bd = d;
            best = c;
        }
    }
    CHECK(std::abs(f.delta[static_cast<size_t>(best)] - 0.5) <= 2 * h);
}

TEST_CASE("marched field error on the disk") {
    const DomainSpec disk = make_disk({0, 0}, 1.0);
    const double h = 1.0 / 128;
    const WeightedGrid g = discretize(disk, h);
    const SignedDistanceField f = signed_distance_field(g);
    double linf = 0.0;
    for (int c : g.inside_cells) {
        const double exact = signed_distance_exact(disk, g.cells[static_cast<size_t>(c)].center);
        linf = std::max(linf, std::abs(f.delta[static_cast<size_t>(c)] - exact));
    }
    CHECK(linf <= 3 * h);
}

TEST_CASE("marched field brackets the exact field on convex shapes") {
    for (const DomainSpec& spec : {make_disk({0, 0}, 1.0), make_rect({0, 0}, 1, 0.8)}) {
        const double h = 1.0 / 64;
        const WeightedGrid g = discretize(spec, h);
        const SignedDistanceField f = signed_distance_field(g);
        const double C = 3.0;
        for (int c : g.inside_cells) {
            const double exact =
                signed_distance_exact(spec, g.cells[static_cast<size_t>(c)].center);
            CHECK(f.delta[static_cast<size_t>(c)] >= exact - C * h);
            CHECK(f.delta[static_cast<size_t>(c)] <= exact + C * h);
        }
    }
}

TEST_CASE("exact-sampled field is 1-Lipschitz across edges") {
    const WeightedGrid g = discretize(make_disk({0.3, -0.2}, 1.0), 1.0 / 64);
    const SignedDistanceField f = exact_distance_field(g);
    for (const GridEdge& e : g.edges) {
        const double da = f.delta[static_cast<size_t>(e.cell_a)];
        const double db = f.delta[static_cast<size_t>(e.cell_b)];
        CHECK(std::abs(da - db) <= g.h * (1 + 1e-9));
    }
}

TEST_CASE("field sign matches the inside flag") {
    const WeightedGrid g = discretize(make_rect({0, 0}, 1, 1), 1.0 / 32);
    const SignedDistanceField f = signed_distance_field(g);
    for (size_t c = 0; c < g.cells.size(); ++c) {
        if (g.cells[c].inside)
            CHECK(f.delta[c] > 0.0);
        else
            CHECK(f.delta[c] <= 0.0);
    }
}

TEST_CASE("eikonal defect on exact fields") {
    const WeightedGrid gd = discretize(make_disk({0, 0}, 1.0), 1.0 / 128);
    CHECK(eikonal_defect(exact_distance_field(gd)) <= 0.05);

    const WeightedGrid gr = discretize(make_rect({0, 0}, 1, 1), 1.0 / 128);
    CHECK(eikonal_defect(exact_distance_field(gr)) <= 0.05);
}

TEST_CASE("eikonal defect vanishes on the interval") {
    const WeightedGrid g = discretize(make_interval(0, 1), 1.0 / 64);
    CHECK(eikonal_defect(exact_distance_field(g)) <= 1e-12);
}

TEST_CASE("eikonal defect decreases under refinement") {
    const DomainSpec disk = make_disk({0, 0}, 1.0);
    const double d1 = eikonal_defect(exact_distance_field(discretize(disk, 1.0 / 128)));
    const double d2 = eikonal_defect(exact_distance_field(discretize(disk, 1.0 / 256)));
    CHECK(d2 <= d1);
}
