#include "mmheat/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "mmheat/errors.hpp"

namespace mmheat {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
}

} // namespace

bool ConfigFile::has(const std::string& key) const {
    return entries.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end())
        throw ConfigError(path + ": missing key '" + key + "'");
    std::string v = it->second.raw;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        v = v.substr(1, v.size() - 2);
    return v;
}

double ConfigFile::get_number(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end())
        throw ConfigError(path + ": missing key '" + key + "'");
    try {
        size_t used = 0;
        const double v = std::stod(it->second.raw, &used);
        if (used != it->second.raw.size())
            fail(path, it->second.line, "key '" + key + "' is not a number");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(path, it->second.line, "key '" + key + "' is not a number");
    }
}

bool ConfigFile::get_bool(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end())
        throw ConfigError(path + ": missing key '" + key + "'");
    if (it->second.raw == "true") return true;
    if (it->second.raw == "false") return false;
    fail(path, it->second.line, "key '" + key + "' is not a boolean");
}

std::string ConfigFile::get_string_or(const std::string& key,
                                      const std::string& d) const {
    return has(key) ? get_string(key) : d;
}

double ConfigFile::get_number_or(const std::string& key, double d) const {
    return has(key) ? get_number(key) : d;
}

bool ConfigFile::get_bool_or(const std::string& key, bool d) const {
    return has(key) ? get_bool(key) : d;
}

ConfigFile parse_config_text(const std::string& text, const std::string& path) {
    ConfigFile f;
    f.path = path;
    std::istringstream in(text);
    std::string line, table;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(path, lineno, "unterminated table header");
            table = trim(line.substr(1, line.size() - 2));
            if (table.empty()) fail(path, lineno, "empty table name");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(path, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty() || val.front() == '=')
            fail(path, lineno, "expected 'key = value'");
        const std::string full = table.empty() ? key : table + "." + key;
        if (f.entries.count(full))
            fail(path, lineno, "duplicate key '" + full + "'");
        f.entries[full] = {val, lineno};
    }
    return f;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

DomainSpec named_domain(const std::string& name) {
    if (name == "disk") return make_disk({0, 0}, 1.0);
    if (name == "square") return make_rect({0, 0}, 1, 1);
    if (name == "rect") return make_rect({0, 0}, 1, 0.6);
    if (name == "interval") return make_interval(0, 1);
    if (name == "figA") return make_ball_minus_square(10.0);
    if (name == "figB") return make_ball_minus_slits(0.1);
    if (name == "disk_minus_slits") return make_disk_minus_slits();
    throw ConfigError("unknown domain '" + name +
                      "' (expected disk, square, rect, interval, figA, figB, "
                      "disk_minus_slits)");
}

ExperimentConfig experiment_from_config(const ConfigFile& f) {
    bool has_domain = false;
    for (const auto& [k, v] : f.entries)
        if (k.rfind("domain.", 0) == 0) has_domain = true;
    if (!has_domain)
        throw ConfigError(f.path + ": missing [domain] table");

    ExperimentConfig cfg;
    const std::string kind = f.get_string("domain.kind");
    if (kind == "disk") {
        cfg.domain = make_disk({f.get_number_or("domain.cx", 0.0),
                                f.get_number_or("domain.cy", 0.0)},
                               f.get_number_or("domain.radius", 1.0));
    } else if (kind == "rect" || kind == "square") {
        cfg.domain = make_rect({f.get_number_or("domain.x", 0.0),
                                f.get_number_or("domain.y", 0.0)},
                               f.get_number_or("domain.width", 1.0),
                               f.get_number_or("domain.height", 1.0));
    } else if (kind == "interval") {
        cfg.domain = make_interval(f.get_number_or("domain.a", 0.0),
                                   f.get_number_or("domain.b", 1.0));
    } else {
        cfg.domain = named_domain(kind);
    }

    cfg.h = f.get_number_or("solve.h", cfg.h);
    cfg.t_min = f.get_number_or("solve.t_min", cfg.t_min);
    cfg.t_max = f.get_number_or("solve.t_max", cfg.t_max);
    cfg.n_times = static_cast<int>(f.get_number_or("solve.n_times", cfg.n_times));
    cfg.tolerance = f.get_number_or("solve.tolerance", cfg.tolerance);
    cfg.steps_per_decade = static_cast<int>(
        f.get_number_or("solve.steps_per_decade", cfg.steps_per_decade));
    cfg.richardson_dt = f.get_bool_or("solve.richardson_dt", cfg.richardson_dt);

    const std::string model =
        f.get_string_or("analysis.model", "sqrt_plus_linear");
    if (model == "sqrt_only")
        cfg.model = FitModel::sqrt_only;
    else if (model == "sqrt_plus_linear")
        cfg.model = FitModel::sqrt_plus_linear;
    else
        throw ConfigError(f.path + ": unknown fit model '" + model + "'");
    cfg.eps = f.get_number_or("analysis.eps", cfg.eps);
    cfg.rho = f.get_number_or("analysis.rho", cfg.rho);
    cfg.pin_c0 = f.get_bool_or("analysis.pin_c0", cfg.pin_c0);

    cfg.out_dir = f.get_string_or("output.dir", cfg.out_dir);

    if (!(cfg.h > 0) || !(cfg.t_min > 0) || !(cfg.t_max > cfg.t_min))
        throw ConfigError(f.path + ": [solve] needs h > 0, 0 < t_min < t_max");
    if (cfg.n_times < 8)
        throw ConfigError(f.path + ": [solve] n_times must be at least 8");
    if (!(cfg.eps > 0))
        throw ConfigError(f.path + ": [analysis] eps must be positive");
    return cfg;
}

} // namespace mmheat
