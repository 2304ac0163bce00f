// hexprint: command-line front end for the surface-sliding print simulator.
//
// Exit codes: 0 success, 1 validation error, 2 run failure, 3 acceptance-check failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "hexprint/analysis.hpp"
#include "hexprint/config.hpp"
#include "hexprint/render.hpp"
#include "hexprint/scenario.hpp"
#include "hexprint/trace_io.hpp"

namespace fs = std::filesystem;
using namespace hexprint;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRunFailure = 2;
constexpr int kCheckFailure = 3;

struct ScenarioOptions {
    std::string file;
    std::string preset;
    std::string path;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& o, const std::string& default_preset)
{
    o.preset = default_preset;
    cmd->add_option("--scenario", o.file, "Scenario config file (TOML)");
    cmd->add_option("--preset", o.preset, "Built-in scenario when no file is given")->capture_default_str();
    cmd->add_option("--path", o.path, "Override the print path with a built-in path");
    cmd->add_option("--seed", o.seed, "Noise seed");
    cmd->add_option("--out", o.out, "Output directory");
}

Scenario resolve(const ScenarioOptions& o)
{
    Scenario s = o.file.empty() ? builtin_scenario(o.preset) : load_scenario(o.file);
    if (!o.path.empty()) {
        s.path = builtin_path(o.path);
    }
    if (o.seed) {
        s.seed = *o.seed;
    }
    if (!o.out.empty()) {
        s.output_dir = o.out;
    }
    s.validate();
    return s;
}

void print_report(const PrintReport& r)
{
    std::printf("max deviation      %.4f m\n", r.max_deviation_m);
    std::printf("rms deviation      %.4f m\n", r.rms_deviation_m);
    std::printf("clump ratio       ");
    for (double c : r.clump_ratio) {
        std::printf(" %.2f", c);
    }
    std::printf("\ngap range          %.3f mm\n", r.gap_range_mm);
    std::printf("normal force var.  %.2f %%\n", r.normal_force_variation_pct);
    std::printf("mission time       %.2f s\n", r.mission_time_s);
}

int cmd_run(const ScenarioOptions& o)
{
    const Scenario s = resolve(o);
    const RunTrace trace = run_scenario(s);
    write_run_outputs(trace, s.output_dir);
    std::printf("scenario %s, seed %llu: %s", s.name.c_str(), static_cast<unsigned long long>(s.seed),
                to_string(trace.status));
    if (!trace.diagnostic.empty()) {
        std::printf(" (%s)", trace.diagnostic.c_str());
    }
    std::printf("\noutputs in %s\n", s.output_dir.c_str());
    if (fs::exists(fs::path(s.output_dir) / "report.json")) {
        print_report(compute_report(trace));
    }
    return succeeded(trace.status) ? kOk : kRunFailure;
}

int cmd_calibrate(const ScenarioOptions& o, double roll_offset, double pitch_offset, const CalibrationOptions& copt,
                  bool inject)
{
    Scenario s = resolve(o);
    if (inject) {
        s.world.estimation_offset_deg.roll = roll_offset;
        s.world.estimation_offset_deg.pitch = pitch_offset;
    }
    CalibrationOptions opts = copt;
    opts.seed = s.seed;
    const CalibrationResult r = calibrate_bias(s.world, 0.0, 0.0, opts);
    nlohmann::json log = nlohmann::json::array();
    for (std::size_t i = 0; i < r.iterations.size(); ++i) {
        const auto& it = r.iterations[i];
        std::printf("iter %2zu  roll %+8.4f deg  pitch %+8.4f deg  drift %.5f m/s\n", i, it.roll_cmd_deg,
                    it.pitch_cmd_deg, it.drift_speed);
        log.push_back({{"roll_cmd_deg", it.roll_cmd_deg},
                       {"pitch_cmd_deg", it.pitch_cmd_deg},
                       {"drift_mps", {it.drift_velocity.x, it.drift_velocity.y}}});
    }
    std::printf("%s: beta_phi %.4f deg, beta_theta %.4f deg\n", r.converged ? "converged" : "NOT converged",
                r.beta_phi_deg, r.beta_theta_deg);
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        const nlohmann::json j = {{"converged", r.converged},
                                  {"beta_phi_deg", r.beta_phi_deg},
                                  {"beta_theta_deg", r.beta_theta_deg},
                                  {"iterations", log}};
        write_text_file(fs::path(o.out) / "calibration.json", j.dump(2) + "\n");
    }
    return r.converged ? kOk : kRunFailure;
}

int cmd_analyze(const std::string& dir, std::optional<double> max_deviation)
{
    const RunTrace trace = load_run(dir);
    const PrintReport report = compute_report(trace);
    std::printf("run status %s\n", to_string(trace.status));
    print_report(report);
    const fs::path saved = fs::path(dir) / "report.json";
    if (fs::exists(saved)) {
        const PrintReport stored = report_from_json(nlohmann::json::parse(read_text_file(saved)));
        const bool same = report_json(stored) == report_json(report);
        std::printf("matches saved report.json: %s\n", same ? "yes" : "NO");
        if (!same) {
            return kCheckFailure;
        }
    }
    if (max_deviation && report.max_deviation_m > *max_deviation) {
        std::printf("max deviation %.4f m exceeds %.4f m\n", report.max_deviation_m, *max_deviation);
        return kCheckFailure;
    }
    return kOk;
}

int cmd_render(const std::string& dir)
{
    const RunTrace trace = load_run(dir);
    write_text_file(fs::path(dir) / "render.svg", render_trace(trace, RenderStyle{}));
    std::printf("wrote %s\n", (fs::path(dir) / "render.svg").c_str());
    return kOk;
}

int cmd_compare(const ScenarioOptions& o)
{
    const Scenario s = resolve(o);
    const DischargeComparison c = compare_discharge(s);
    std::printf("v_remaining %.1f%% -> %.1f%%\n", c.v_remaining_start, c.v_remaining_end);
    std::printf("compensated  %-18s friction variation %.3f %%\n", to_string(c.compensated_status),
                c.compensated_variation_pct);
    std::printf("constant     %-18s friction variation %.3f %%\n", to_string(c.constant_status),
                c.constant_variation_pct);
    if (!c.diagnostic.empty()) {
        std::printf("note: %s\n", c.diagnostic.c_str());
    }
    std::printf("compensation reduces variation: %s\n", c.compensation_reduces ? "yes" : "no");
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        const nlohmann::json j = {{"compensated_status", to_string(c.compensated_status)},
                                  {"constant_status", to_string(c.constant_status)},
                                  {"compensated_variation_pct", c.compensated_variation_pct},
                                  {"constant_variation_pct", c.constant_variation_pct},
                                  {"v_remaining_start", c.v_remaining_start},
                                  {"v_remaining_end", c.v_remaining_end},
                                  {"complete", c.complete},
                                  {"compensation_reduces", c.compensation_reduces},
                                  {"diagnostic", c.diagnostic}};
        write_text_file(fs::path(o.out) / "comparison.json", j.dump(2) + "\n");
    }
    if (!c.complete) {
        return kRunFailure;
    }
    return c.compensation_reduces ? kOk : kCheckFailure;
}

int cmd_paths(const std::string& name)
{
    if (name.empty()) {
        for (const auto& n : builtin_path_names()) {
            std::printf("%s\n", n.c_str());
        }
        return kOk;
    }
    const PrintPath p = builtin_path(name);
    for (const auto& w : p.waypoints) {
        std::printf("%.4f %.4f %s\n", w.position.x, w.position.y, w.extrude ? "extrude" : "travel");
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Surface-sliding hexacopter print simulator"};
    app.require_subcommand(1);

    ScenarioOptions run_opts;
    auto* run = app.add_subcommand("run", "Simulate a print mission and write trace, bead, report and render");
    add_scenario_options(run, run_opts, "square");

    ScenarioOptions cal_opts;
    CalibrationOptions copt;
    double roll_offset = 0.0;
    double pitch_offset = 0.0;
    auto* cal = app.add_subcommand("calibrate", "Find roll/pitch biases from hover drift");
    add_scenario_options(cal, cal_opts, "square");
    auto* inject_roll = cal->add_option("--offset-roll", roll_offset, "Inject a roll estimation offset (deg)");
    auto* inject_pitch = cal->add_option("--offset-pitch", pitch_offset, "Inject a pitch estimation offset (deg)");
    cal->add_option("--tolerance", copt.drift_tolerance_mps, "Drift speed tolerance (m/s)")->capture_default_str();
    cal->add_option("--max-iterations", copt.max_iterations, "Iteration budget")->capture_default_str();

    std::string run_dir;
    std::optional<double> max_dev;
    auto* analyze = app.add_subcommand("analyze", "Recompute the print report from a saved run");
    analyze->add_option("--out", run_dir, "Run output directory")->required();
    analyze->add_option("--max-deviation", max_dev, "Fail (exit 3) above this max deviation in metres");

    std::string render_dir;
    auto* render = app.add_subcommand("render", "Re-render render.svg from a saved run");
    render->add_option("--out", render_dir, "Run output directory")->required();

    ScenarioOptions cmp_opts;
    auto* compare = app.add_subcommand("compare-discharge", "Compensated vs constant thrust over a discharge");
    add_scenario_options(compare, cmp_opts, "discharge");

    std::string path_name;
    auto* paths = app.add_subcommand("paths", "List built-in paths or print one");
    paths->add_option("--path", path_name, "Path to print");

    ScenarioOptions cfg_opts;
    auto* config = app.add_subcommand("config", "Print a scenario as canonical config text");
    add_scenario_options(config, cfg_opts, "square");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*run) return cmd_run(run_opts);
        if (*cal) return cmd_calibrate(cal_opts, roll_offset, pitch_offset, copt, *inject_roll || *inject_pitch);
        if (*analyze) return cmd_analyze(run_dir, max_dev);
        if (*render) return cmd_render(render_dir);
        if (*compare) return cmd_compare(cmp_opts);
        if (*paths) return cmd_paths(path_name);
        if (*config) {
            std::cout << scenario_to_toml(resolve(cfg_opts));
            return kOk;
        }
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kValidation;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRunFailure;
    }
    return kOk;
}
