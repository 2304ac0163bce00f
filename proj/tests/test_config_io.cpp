#include "doctest.h"

#include <filesystem>

#include "hexprint/config.hpp"
#include "hexprint/render.hpp"
#include "hexprint/trace_io.hpp"

using namespace hexprint;
namespace fs = std::filesystem;

TEST_CASE("canonical config text round-trips")
{
    for (const auto& name : builtin_scenario_names()) {
        const std::string text = scenario_to_toml(builtin_scenario(name));
        CHECK(scenario_to_toml(scenario_from_toml(text)) == text);
    }
}

TEST_CASE("config overrides apply and defaults fill the rest")
{
    const Scenario s = scenario_from_toml(R"(
# comment
[scenario]
name = "custom"
seed = 9

[controller]
pitch_gains = [300, 100, 40]
sliding_speed_mps = 0.01

[path]
name = "two-leg"
waypoints_m = [[0, 0], [0.05, 0], [0.05, 0.05]]
extrude = [true, true, false]
)");
    CHECK(s.name == "custom");
    CHECK(s.seed == 9);
    CHECK(s.controller.pitch.kp == 300.0);
    CHECK(s.controller.roll.kp == ControllerConfig{}.roll.kp);
    CHECK(s.controller.sliding_speed_mps == 0.01);
    REQUIRE(s.path.waypoints.size() == 3);
    CHECK_FALSE(s.path.waypoints[2].extrude);
}

TEST_CASE("config rejects unknown keys, bad syntax and invalid values")
{
    CHECK_THROWS_AS(scenario_from_toml("[world]\nmass = 2\n"), ConfigError);
    CHECK_THROWS_AS(scenario_from_toml("[nowhere]\n"), ConfigError);
    CHECK_THROWS_AS(scenario_from_toml("[world]\nmass_kg = \n"), ConfigError);
    CHECK_THROWS_AS(scenario_from_toml("[world]\nmass_kg = \"heavy\"\n"), ConfigError);
    CHECK_THROWS_AS(scenario_from_toml("[path]\nwaypoints_m = []\nextrude = []\n"), ValidationError);
}

TEST_CASE("trace csv round-trips exactly")
{
    Scenario s = builtin_scenario("line");
    const RunTrace t = run_scenario(s);
    const std::string csv = trace_csv(t.records);
    CHECK(csv.rfind(kTraceCsvHeader, 0) == 0);
    CHECK(trace_csv(parse_trace_csv(csv)) == csv);
}

TEST_CASE("saved run replays the report bit-exactly")
{
    const fs::path dir = fs::temp_directory_path() / "hexprint_replay_test";
    fs::remove_all(dir);
    const RunTrace t = run_scenario(builtin_scenario("square_dwell"));
    write_run_outputs(t, dir);
    for (const char* f : {"trace.csv", "bead.json", "report.json", "render.svg"}) {
        CHECK(fs::exists(dir / f));
    }
    const RunTrace loaded = load_run(dir);
    const auto saved = nlohmann::json::parse(read_text_file(dir / "report.json"));
    CHECK(report_json(compute_report(loaded)) == saved);
    CHECK(report_json(report_from_json(saved)) == saved);
    CHECK(render_trace(loaded, RenderStyle{}) == read_text_file(dir / "render.svg"));
    fs::remove_all(dir);
}
