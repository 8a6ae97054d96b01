#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "mmheat/domain.hpp"
#include "mmheat/errors.hpp"
#include "mmheat/rays.hpp"

using namespace mmheat;

namespace {

const std::vector<std::function<double(const Vec3&)>> kTestIntegrands = {
    [](const Vec3&) { return 1.0; },
    [](const Vec3& p) { return p.x; },
    [](const Vec3& p) { return p.y; },
    [](const Vec3& p) { return p.x * p.x + p.y * p.y; },
};

// Moments of the unit disk and the unit square against kTestIntegrands.
const double kDiskMoments[4] = {M_PI, 0.0, 0.0, M_PI / 2};
const double kSquareMoments[4] = {1.0, 0.5, 0.5, 2.0 / 3.0};

} // namespace

TEST_CASE("disintegration reconstructs disk moments") {
    const RayDecomposition d = decompose(make_disk({0, 0}, 1.0), 4096);
    for (size_t i = 0; i < kTestIntegrands.size(); ++i)
        CHECK(std::abs(reconstruct(d, kTestIntegrands[i]) - kDiskMoments[i]) <=
              1e-6);
}

TEST_CASE("disintegration reconstructs square moments") {
    const RayDecomposition d = decompose(make_rect({0, 0}, 1, 1), 4096);
    for (size_t i = 0; i < kTestIntegrands.size(); ++i)
        CHECK(std::abs(reconstruct(d, kTestIntegrands[i]) - kSquareMoments[i]) <=
              1e-6);
}

TEST_CASE("interval decomposition reconstructs length") {
    const RayDecomposition d = decompose(make_interval(0, 1), 64);
    CHECK(reconstruct(d, [](const Vec3&) { return 1.0; }) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("slit-ball decomposition reconstructs the ball volume") {
    const RayDecomposition d = decompose(make_ball_minus_slits(0.1), 16384);
    const double vol = reconstruct(d, [](const Vec3&) { return 1.0; });
    CHECK(std::abs(vol - 4.0 * M_PI / 3.0) <= 0.02);
}

TEST_CASE("disk density is affine with the polar slope") {
    const RayDecomposition d = decompose(make_disk({0, 0}, 2.0), 256);
    for (const auto& r : d.rays) {
        CHECK(r.family == RayFamily::circle);
        CHECK(r.inner_length == doctest::Approx(2.0));
        CHECK(r.density(0.0) == doctest::Approx(1.0));
        CHECK(r.density(1.0) == doctest::Approx(0.5)); // 1 - s/R at s = 1
    }
}

TEST_CASE("regular Laplacian matches the classical value on the disk") {
    const RayDecomposition d = decompose(make_disk({0, 0}, 1.0), 256);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    int checked = 0;
    while (checked < 100) {
        const Vec2 x{uni(rng), uni(rng)};
        const double r = x.norm();
        if (r < 0.05 || r > 0.95) continue;
        ++checked;
        CHECK(std::abs(laplacian_delta_reg(d, x) - (-1.0 / r)) <= 1e-9);
    }
}

TEST_CASE("regular Laplacian against a finite-difference oracle") {
    // 5-point Laplacian of the exact delta field of the disk.
    const DomainSpec disk = make_disk({0, 0}, 1.0);
    const RayDecomposition d = decompose(disk, 256);
    const double h = 1e-3;
    for (const Vec2& x : {Vec2{0.5, 0.0}, Vec2{0.2, 0.3}, Vec2{-0.4, 0.35}}) {
        const auto del = [&](double dx, double dy) {
            return signed_distance_exact(disk, {x.x + dx, x.y + dy});
        };
        const double fd = (del(h, 0) + del(-h, 0) + del(0, h) + del(0, -h) -
                           4 * del(0, 0)) /
                          (h * h);
        CHECK(std::abs(laplacian_delta_reg(d, x) - fd) <= 1e-4);
    }
}

TEST_CASE("edge strip interior has zero regular Laplacian") {
    const RayDecomposition d = decompose(make_rect({0, 0}, 1, 1), 256);
    CHECK(laplacian_delta_reg(d, {0.5, 0.1}) == 0.0);
    CHECK(laplacian_delta_reg(d, {0.9, 0.45}) == 0.0);
}

TEST_CASE("cut locus points are rejected") {
    const RayDecomposition d = decompose(make_disk({0, 0}, 1.0), 256);
    CHECK_THROWS_AS(laplacian_delta_reg(d, {0, 0}), OnCutLocus);
    const RayDecomposition ds = decompose(make_rect({0, 0}, 1, 1), 256);
    CHECK_THROWS_AS(laplacian_delta_reg(ds, {0.5, 0.5}), OnCutLocus);
}

TEST_CASE("model functions") {
    CHECK(s_kappa(0, 0.7) == 0.7);
    CHECK(s_kappa(1, M_PI / 2) == doctest::Approx(1.0));
    CHECK(s_kappa_prime(0, 3.0) == 1.0);
    CHECK(s_kappa(-1, 0.5) == doctest::Approx(std::sinh(0.5)));
    CHECK(j_kappa(4.0) == doctest::Approx(M_PI / 2));
    CHECK(std::isinf(j_kappa(0.0)));
    // s_kappa(0) = 0, s_kappa'(0) = 1 for every kappa.
    for (double k : {-1.0, 0.0, 1.0}) {
        CHECK(s_kappa(k, 0.0) == 0.0);
        CHECK(s_kappa(k, 1e-9) == doctest::Approx(1e-9).epsilon(1e-6));
    }
}

TEST_CASE("comparison bounds hold on disk and square") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<Vec2> pts;
    for (int i = 0; i < 400; ++i) pts.push_back({uni(rng), uni(rng)});

    const RayDecomposition d = decompose(make_disk({0, 0}, 1.0), 256);
    std::vector<Vec2> inside;
    for (const Vec2& p : pts)
        if (p.norm() < 0.98 && p.norm() > 0.02) inside.push_back(p);
    const ComparisonReport rd = comparison_check(d, 0.0, 2.0, inside);
    CHECK(rd.violations == 0);
    CHECK(rd.checked > 100);

    const RayDecomposition ds = decompose(make_rect({0, 0}, 1, 1), 256);
    std::vector<Vec2> sq;
    for (const Vec2& p : pts) sq.push_back({0.5 + 0.49 * p.x, 0.5 + 0.49 * p.y});
    const ComparisonReport rs = comparison_check(ds, 0.0, 2.0, sq);
    CHECK(rs.violations == 0);
}

TEST_CASE("disk lower comparison bound is attained") {
    const RayDecomposition d = decompose(make_disk({0, 0}, 1.0), 256);
    // At |x| = 0.5 the inner endpoint is the center: d_a = 0.5, bound -2.
    const double val = laplacian_delta_reg(d, {0.5, 0.0});
    CHECK(val == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(val == doctest::Approx(-s_kappa_prime(0, 0.5) / s_kappa(0, 0.5)));
}

TEST_CASE("classifier truth table") {
    const IgcReport disk = migc_check(make_disk({0, 0}, 1.0), 0.5);
    CHECK(disk.migc);
    CHECK(disk.interior_ball);
    CHECK(disk.exterior_ball);

    const IgcReport figa = migc_check(make_ball_minus_square(10.0), 0.1);
    CHECK(figa.migc);
    CHECK(figa.interior_ball);
    CHECK_FALSE(figa.exterior_ball);

    const IgcReport figb = migc_check(make_ball_minus_slits(0.1), 0.1);
    CHECK(figb.interior_ball);
    CHECK_FALSE(figb.migc);
    CHECK(figb.short_ray_fraction > 1e-9);
    CHECK_FALSE(figb.exterior_ball);
}

TEST_CASE("ray-length criterion agrees with the band Monte-Carlo") {
    CHECK(uncovered_band_fraction(make_disk({0, 0}, 1.0), 0.5, 2000) == 0.0);
    CHECK(uncovered_band_fraction(make_ball_minus_square(10.0), 0.1, 2000) ==
          0.0);
    CHECK(uncovered_band_fraction(make_ball_minus_slits(0.1), 0.1, 2000) > 0.0);
}

TEST_CASE("density variation bound on the disk") {
    const RayDecomposition d = decompose(make_disk({0, 0}, 1.0), 4096);
    const HalphaReport rep = halpha_l1_bound(d, 0.5);
    CHECK(rep.bounded);
    CHECK(rep.max_h_prime_l1 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rep.band_l1_laplacian == doctest::Approx(M_PI).epsilon(1e-6));
}

TEST_CASE("density variation is finite off the corner fans") {
    const RayDecomposition d = decompose(make_ball_minus_square(10.0), 2048);
    const HalphaReport rep = halpha_l1_bound(d, 0.1);
    CHECK(rep.bounded);
    CHECK(rep.max_h_prime_l1 <= 0.11); // fans: |h(eps) - h(0)| = eps
    for (const auto& r : d.rays)
        if (r.family == RayFamily::edge)
            CHECK(r.density(0.05) == r.density(0.0));
}

TEST_CASE("short rays trip the variation bound") {
    // A square has rays of every length below the half-diagonal near its
    // corners, so the eps-band hypothesis fails for every eps.
    const RayDecomposition d = decompose(make_rect({0, 0}, 1, 1), 1024);
    CHECK_THROWS_AS(halpha_l1_bound(d, 0.25), MigcViolated);
}

TEST_CASE("Lp norms of the band Laplacian") {
    const RayDecomposition d = decompose(make_disk({0, 0}, 1.0), 1024);
    for (double p : {1.0, 2.0, 4.0}) {
        const double v = lp_norm_laplacian(d, 0.5, p);
        CHECK(std::isfinite(v));
        CHECK(v > 0);
    }
    // |[lap delta]^reg| <= 2 on the half band.
    CHECK(lp_norm_laplacian(d, 0.5, 1.0) == doctest::Approx(M_PI).epsilon(1e-9));
    CHECK(std::isinf(lp_norm_laplacian(d, 1.0, 2.0)));

    const RayDecomposition ds = decompose(make_rect({0, 0}, 1, 1), 1024);
    CHECK(lp_norm_laplacian(ds, 0.1, 2.0) == 0.0); // edge strips only
}

TEST_CASE("CD(0,2) concavity of planar densities") {
    for (const DomainSpec& spec :
         {make_disk({0, 0}, 1.0), make_rect({0, 0}, 1, 1),
          make_ball_minus_square(10.0)}) {
        const RayDecomposition d = decompose(spec, 512);
        for (const auto& r : d.rays) {
            const double L = r.inner_length;
            for (int i = 1; i < 8; ++i) {
                const double s = L * i / 8.0, ds = L / 8.0;
                const double dd =
                    r.density(s - ds) - 2 * r.density(s) + r.density(s + ds);
                CHECK(dd <= 1e-9);
            }
        }
    }
}

TEST_CASE("foot map coverage") {
    const RayDecomposition disk = decompose(make_disk({0, 0}, 1.0), 1024);
    CHECK(foot_map_surjectivity(disk, 0.5, boundary_samples(disk.domain, 512))
              .covered);

    const RayDecomposition figa = decompose(make_ball_minus_square(10.0), 4096);
    CHECK(foot_map_surjectivity(figa, 0.1, boundary_samples(figa.domain, 512))
              .covered);

    const RayDecomposition figb = decompose(make_ball_minus_slits(0.1), 4096);
    CHECK_FALSE(
        foot_map_surjectivity(figb, 0.1, boundary_samples(figb.domain, 512))
            .covered);
}

TEST_CASE("decomposition rejects tiny ray counts and odd shapes") {
    CHECK_THROWS_AS(decompose(make_disk({0, 0}, 1.0), 8), ConfigError);
    CHECK_THROWS_AS(decompose(make_disk_minus_slits(), 256), UnsupportedShape);
}
