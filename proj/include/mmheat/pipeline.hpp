#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mmheat/asympt.hpp"
#include "mmheat/coarea.hpp"
#include "mmheat/config.hpp"
#include "mmheat/heatflow.hpp"

namespace mmheat {

// 17 significant digits, locale-independent; the diff-able CSV convention.
std::string csv_number(double v);

void write_trace_csv(const std::string& path, const HeatTrace& trace);
void write_profile_csv(const std::string& path, const LevelProfile& profile);
void write_fit_csv(const std::string& path, const AsymptoticFit& fit);
HeatTrace read_trace_csv(const std::string& path);
AsymptoticFit read_fit_csv(const std::string& path);

// Self-contained SVG of (c0 - Q)/sqrt(t) against sqrt(t) with the fitted
// line c1 - c2 sqrt(t).
void write_fit_svg(const std::string& path, const HeatTrace& trace,
                   const AsymptoticFit& fit);

struct RunResult {
    HeatTrace trace;
    LevelProfile profile;
    AsymptoticFit fit;
    double perimeter_est = 0;
    double eikonal = 0;
};

// discretize -> distance -> heat solve -> profiles -> fit; writes trace.csv,
// profile.csv, fit.csv, plot.svg into cfg.out_dir. Throws MigcViolated when
// eps exceeds the inradius (the band hypothesis cannot hold).
RunResult run_experiment(const ExperimentConfig& cfg);

// Acceptance criteria, one JSON line per criterion on `out`. suite is "fast"
// or "full" (full adds the h = 1/512 runs). Returns true when all pass.
bool run_acceptance(const std::string& suite, std::ostream& out);

} // namespace mmheat
