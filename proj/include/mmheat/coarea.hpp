#pragma once

#include <functional>
#include <vector>

#include "mmheat/distfield.hpp"
#include "mmheat/heatflow.hpp"

namespace mmheat {

// Volume / perimeter along the level sets {delta > r}.
struct LevelProfile {
    enum class Source { band, ray, exact };
    std::vector<double> radii;
    std::vector<double> volume;
    std::vector<double> perimeter; // empty until differentiated
    Source source = Source::band;
    double h = 0; // grid spacing of the originating field
};

// m({delta > r_j}) by summing cell measures; exact on the discrete space.
LevelProfile volume_profile(const SignedDistanceField& field,
                            std::vector<double> radii);

// Per({delta > r}) = -d/dr volume by central differences; the r = 0 value is
// extrapolated one-sidedly. Requires radius spacing >= 2h.
LevelProfile perimeter_profile(LevelProfile profile);

// Weak Gauss-Green defect at level r: discrete divergence of w summed over
// {delta > r} against the band estimate of the boundary flux.
double gauss_green_defect(const WeightedGrid& grid,
                          const SignedDistanceField& field,
                          const std::function<Vec2(const Vec2&)>& w, double r,
                          double band_width);

// Cubic-smoothstep cutoff in delta: 1 on {delta <= plateau}, 0 past eps.
struct Cutoff {
    double eps = 0;
    double plateau = 0; // defaults to eps / 2 when 0

    double operator()(double delta) const;
};

struct MeanValueSurface {
    std::vector<double> times;
    std::vector<double> radii;
    std::vector<std::vector<double>> F; // [time][radius]
    // Relative defects of the distributional F'' identity, three bump test
    // functions per sample time, flattened time-major.
    std::vector<double> identity_defects;
};

// F(t,r) = int_{delta>r} (1-u_t) phi dm tabulated from the retained
// snapshots, plus the weak F'' check against the Laplacian representation.
// lap_reg supplies [lap delta]^reg at cell centers (rays oracle).
MeanValueSurface mean_value_F(const WeightedGrid& grid,
                              const SignedDistanceField& field,
                              const HeatTrace& trace, Cutoff phi,
                              const std::vector<double>& radii,
                              const std::function<double(const Vec2&)>& lap_reg);

} // namespace mmheat
