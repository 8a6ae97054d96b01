#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmheat/config.hpp"
#include "mmheat/errors.hpp"
#include "mmheat/pipeline.hpp"

using namespace mmheat;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path temp_dir(const std::string& tag) {
    const fs::path d = fs::temp_directory_path() / ("mmheat_test_" + tag);
    fs::create_directories(d);
    return d;
}

const char* kDiskConfig = R"([domain]
kind = "disk"
radius = 1.0

[solve]
h = 0.0078125       # 1/128
t_min = 0.0062
t_max = 0.0156
n_times = 10

[analysis]
model = "sqrt_plus_linear"
eps = 0.5

[output]
dir = "OUTDIR"
)";

std::string disk_config(const fs::path& out) {
    std::string s = kDiskConfig;
    s.replace(s.find("OUTDIR"), 6, out.string());
    return s;
}

} // namespace

TEST_CASE("config parser handles tables, comments, and types") {
    const ConfigFile f = parse_config_text(
        "top = 1\n[a]\nx = 2.5 # trailing\nname = \"disk\"\nflag = true\n",
        "test.toml");
    CHECK(f.get_number("top") == 1.0);
    CHECK(f.get_number("a.x") == 2.5);
    CHECK(f.get_string("a.name") == "disk");
    CHECK(f.get_bool("a.flag"));
    CHECK(f.get_number_or("a.missing", 7.0) == 7.0);
}

TEST_CASE("config parser reports the offending line") {
    try {
        parse_config_text("[a]\nx == 3\n", "bad.toml");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.toml:2") != std::string::npos);
    }
    try {
        parse_config_text("[a]\nx = banana\n", "bad.toml").get_number("a.x");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bad.toml:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("[a\nx = 1\n", "t"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("x = 1\nx = 2\n", "t"), ConfigError);
}

TEST_CASE("missing domain table is named") {
    const ConfigFile f = parse_config_text("[solve]\nh = 0.01\n", "t.toml");
    try {
        experiment_from_config(f);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("[domain]") != std::string::npos);
    }
}

TEST_CASE("named stock domains resolve") {
    for (const char* name :
         {"disk", "square", "rect", "interval", "figA", "figB"})
        CHECK_NOTHROW(named_domain(name));
    CHECK_THROWS_AS(named_domain("pentagon"), ConfigError);
}

TEST_CASE("csv numbers survive a round trip") {
    for (double v : {M_PI, 1.0 / 3.0, 6.02214076e23, -1.5e-300})
        CHECK(std::stod(csv_number(v)) == v);
}

TEST_CASE("trace csv round trip") {
    const fs::path d = temp_dir("trace");
    HeatTrace tr;
    tr.times = {1e-3, 1e-2, 1e-1};
    tr.Q = {0.9, 0.7, 0.4};
    write_trace_csv((d / "t.csv").string(), tr);
    const HeatTrace back = read_trace_csv((d / "t.csv").string());
    REQUIRE(back.times.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(back.times[i] == tr.times[i]);
        CHECK(back.Q[i] == tr.Q[i]);
    }
}

TEST_CASE("pipeline on a stock disk config") {
    const fs::path out = temp_dir("disk_run");
    const ExperimentConfig cfg = experiment_from_config(
        parse_config_text(disk_config(out), "disk.toml"));
    const RunResult res = run_experiment(cfg);
    CHECK(std::abs(res.perimeter_est - 2 * M_PI) <= 0.02 * 2 * M_PI);
    for (const char* f : {"trace.csv", "profile.csv", "fit.csv", "plot.svg"})
        CHECK(fs::exists(out / f));
    CHECK(slurp(out / "plot.svg").find("<svg") != std::string::npos);

    // Determinism: a second run writes byte-identical CSVs.
    const std::string before = slurp(out / "trace.csv");
    run_experiment(cfg);
    CHECK(slurp(out / "trace.csv") == before);
}

TEST_CASE("oversized analysis band is rejected") {
    const fs::path out = temp_dir("band");
    std::string text = disk_config(out);
    text.replace(text.find("eps = 0.5"), 9, "eps = 1.5");
    const ExperimentConfig cfg =
        experiment_from_config(parse_config_text(text, "disk.toml"));
    CHECK_THROWS_AS(run_experiment(cfg), MigcViolated);
}

TEST_CASE("cli binary maps errors to exit codes") {
    const char* bin_env = std::getenv("MMHEAT_BIN");
    const std::string bin = bin_env ? bin_env : "../tools/mmheat";
    if (!fs::exists(bin)) return; // binary not built in this configuration

    auto run = [&](const std::string& args) {
        const int st = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(st);
    };
    CHECK(run("check-igc --domain disk --eps 0.5") == 0);
    CHECK(run("check-igc --domain disk --eps 1.5") == 2);
    CHECK(run("check-igc --domain figB --eps 0.1") == 2);
    CHECK(run("nonsense") == 2);
    CHECK(run("accept lukewarm") == 2);
}
