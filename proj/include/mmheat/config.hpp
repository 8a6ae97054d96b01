#pragma once

#include <map>
#include <optional>
#include <string>

#include "mmheat/asympt.hpp"
#include "mmheat/domain.hpp"

namespace mmheat {

// Flat view of a TOML-subset file: [table] headers, key = value lines with
// string, number, and boolean values. Enough for experiment configs; arrays
// and nesting are not part of the format.
struct ConfigFile {
    struct Entry {
        std::string raw;
        int line = 0;
    };
    std::map<std::string, Entry> entries; // "table.key" -> raw value
    std::string path;

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    double get_number(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& d) const;
    double get_number_or(const std::string& key, double d) const;
    bool get_bool_or(const std::string& key, bool d) const;
};

ConfigFile parse_config_text(const std::string& text, const std::string& path);
ConfigFile load_config(const std::string& path);

struct ExperimentConfig {
    DomainSpec domain;
    double h = 1.0 / 128;
    double t_min = 1e-3;
    double t_max = 0.05;
    int n_times = 16;
    double tolerance = 1e-10;
    int steps_per_decade = 32;
    bool richardson_dt = false;
    FitModel model = FitModel::sqrt_plus_linear;
    double eps = 0.25;   // band width for the mIGC gate and the fit ceiling
    double rho = 1.0;
    bool pin_c0 = false;
    std::string out_dir = ".";
};

// Stock domains by CLI name: disk, square, rect, interval, figA, figB,
// disk_minus_slits. Throws ConfigError on unknown names.
DomainSpec named_domain(const std::string& name);

ExperimentConfig experiment_from_config(const ConfigFile& f);

} // namespace mmheat
