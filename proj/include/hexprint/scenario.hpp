#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hexprint/analysis.hpp"
#include "hexprint/controller.hpp"
#include "hexprint/deposition.hpp"
#include "hexprint/power.hpp"
#include "hexprint/world.hpp"

namespace hexprint {

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A corner of the print path. `extrude` applies to the leg that ends here.
struct PathWaypoint {
    Vec2 position;
    bool extrude = true;
};

struct PrintPath {
    std::string name;
    std::vector<PathWaypoint> waypoints;

    std::vector<Vec2> corners() const;
    bool closed() const;
    /// Extruding legs merged into strokes, for deviation measurement and rendering.
    std::vector<Polyline> strokes() const;
    /// Distinct waypoints touched by an extruding leg.
    std::vector<Vec2> print_corners() const;
    /// Distinct waypoints that start an extruding leg.
    std::vector<Vec2> stroke_starts() const;
};

/// Named path library. Throws ValidationError listing the known names on a miss.
PrintPath builtin_path(const std::string& name);
std::vector<std::string> builtin_path_names();

struct PowerParams {
    BatteryState battery;
    std::vector<DischargeKnot> discharge_knots = DischargeCurve::lipo_default(16.8, 13.2).interior_knots();
    ThrustCurve curve;
    CurrentModel current;
    ThrustEfficiencyTable efficiency = ThrustEfficiencyTable::defaults();
    bool compensation = true; // false: hold the command computed at handoff
};

struct MissionParams {
    double start_height_m = 0.15;       // above the surface, scripted descent starts here
    double descent_rate_mps = 0.1;
    double corner_dwell_s = 0.0;        // wait at each corner before loading the next one
    bool extrude_during_dwell = true;   // false gates extrusion off while waiting at a corner
    double contact_grace_s = 0.5;
    bool repeat_path = false;
    double stop_at_v_remaining_pct = 0.0; // battery swap threshold; 0 disables
    double measurement_noise_m = 0.0;
};

struct AnalysisParams {
    double corner_radius_m = 0.015;
    double start_exclusion_m = 0.02;
};

struct Scenario {
    std::string name = "square";
    WorldParams world;
    ControllerConfig controller;
    PowerParams power;
    DepositionParams deposition;
    NozzleGeometry nozzle;
    MissionParams mission;
    AnalysisParams analysis;
    PrintPath path = builtin_path("square10cm");
    std::uint64_t seed = 1;
    double max_duration_s = 120.0;
    std::string output_dir = "out";

    void validate() const;
};

/// Preset scenarios: square, square_dwell, square_gated, ut, line, discharge.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

enum class RunStatus {
    Completed,
    BatteryThreshold, // stopped at the configured swap threshold
    Timeout,
    BatteryExhausted,
    ContactLost,
    NonFinite,
};

const char* to_string(RunStatus status);
RunStatus run_status_from_string(const std::string& text);
bool succeeded(RunStatus status);

enum class Phase { Descent = 0, Print = 1 };

struct RunRecord {
    double time = 0.0;
    Phase phase = Phase::Descent;
    Vec3 position;
    Vec2 setpoint;
    double roll_cmd_deg = 0.0;
    double pitch_cmd_deg = 0.0;
    double thrust_cmd_pct = 0.0;
    double normal_force_n = 0.0;
    double voltage_v = 0.0;
    double v_remaining_pct = 0.0;
    bool in_contact = false;
    bool extruding = false;
};

struct RunTrace {
    std::vector<RunRecord> records;
    BeadTrace bead;
    RunStatus status = RunStatus::Completed;
    std::string diagnostic;
    int handoffs = 0;
    double handoff_time = 0.0;
    double end_time = 0.0;
    double flow_rate_mm3ps = 0.0;
    std::vector<Polyline> target;
    std::vector<Vec2> corners;
    std::vector<Vec2> stroke_starts;
    AnalysisParams analysis;
    bool thrust_extrapolated = false;
};

RunTrace run_scenario(const Scenario& scenario);

/// Metrics of a finished run; a pure function of the trace.
PrintReport compute_report(const RunTrace& trace);

/// Normal-force samples of the print phase while in contact.
std::vector<double> contact_normal_forces(const RunTrace& trace);

struct DischargeComparison {
    RunStatus compensated_status = RunStatus::Completed;
    RunStatus constant_status = RunStatus::Completed;
    double compensated_variation_pct = 0.0;
    double constant_variation_pct = 0.0;
    double v_remaining_start = 0.0;
    double v_remaining_end = 0.0;
    bool complete = false;             // both runs produced a contact phase
    bool compensation_reduces = false;
    std::string diagnostic;
};

DischargeComparison compare_discharge(const Scenario& scenario);

}  // namespace hexprint
