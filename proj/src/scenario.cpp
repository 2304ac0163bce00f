#include "hexprint/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace hexprint {

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

std::vector<Vec2> PrintPath::corners() const
{
    std::vector<Vec2> out;
    out.reserve(waypoints.size());
    for (const auto& w : waypoints) {
        out.push_back(w.position);
    }
    return out;
}

bool PrintPath::closed() const
{
    return waypoints.size() > 2 && waypoints.front().position == waypoints.back().position;
}

std::vector<Polyline> PrintPath::strokes() const
{
    std::vector<Polyline> out;
    Polyline current;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        if (waypoints[i].extrude) {
            if (current.empty()) {
                current.push_back(waypoints[i - 1].position);
            }
            current.push_back(waypoints[i].position);
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        out.push_back(std::move(current));
    }
    return out;
}

namespace {

void push_unique(std::vector<Vec2>& points, Vec2 p)
{
    if (std::find(points.begin(), points.end(), p) == points.end()) {
        points.push_back(p);
    }
}

}  // namespace

std::vector<Vec2> PrintPath::print_corners() const
{
    std::vector<Vec2> out;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        if (waypoints[i].extrude) {
            push_unique(out, waypoints[i - 1].position);
            push_unique(out, waypoints[i].position);
        }
    }
    return out;
}

std::vector<Vec2> PrintPath::stroke_starts() const
{
    std::vector<Vec2> out;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        if (waypoints[i].extrude) {
            push_unique(out, waypoints[i - 1].position);
        }
    }
    return out;
}

std::vector<std::string> builtin_path_names()
{
    return {"square10cm", "UT", "line", "L"};
}

PrintPath builtin_path(const std::string& name)
{
    if (name == "square10cm") {
        return {name, {{{0.0, 0.0}}, {{0.1, 0.0}}, {{0.1, 0.1}}, {{0.0, 0.1}}, {{0.0, 0.0}}}};
    }
    if (name == "line") {
        return {name, {{{0.0, 0.0}}, {{0.1, 0.0}}}};
    }
    if (name == "L") {
        return {name, {{{0.0, 0.1}}, {{0.0, 0.0}}, {{0.06, 0.0}}}};
    }
    if (name == "UT") {
        // U as three strokes, dry travel to the T, bar, dry return to the bar center, stem.
        return {name,
                {{{0.0, 0.1}},
                 {{0.0, 0.0}},
                 {{0.06, 0.0}},
                 {{0.06, 0.1}},
                 {{0.09, 0.1}, false},
                 {{0.17, 0.1}},
                 {{0.13, 0.1}, false},
                 {{0.13, 0.0}}}};
    }
    std::ostringstream msg;
    msg << "unknown path '" << name << "'; available:";
    for (const auto& n : builtin_path_names()) {
        msg << ' ' << n;
    }
    throw ValidationError(msg.str());
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

void Scenario::validate() const
{
    try {
        world.validate();
        controller.validate();
        power.efficiency.validate();
        DischargeCurve(power.battery.v_max, power.battery.v_min, power.discharge_knots);
    } catch (const std::exception& e) {
        throw ValidationError(e.what());
    }
    auto fail = [](const std::string& what) { throw ValidationError("invalid scenario: " + what); };
    if (path.waypoints.size() < 2) fail("a print mission needs at least 2 waypoints");
    for (const auto& w : path.waypoints) {
        if (!w.position.finite()) fail("non-finite waypoint");
    }
    if (!(power.battery.v_max > power.battery.v_min)) fail("battery v_max must exceed v_min");
    if (!(power.battery.capacity_c > 0.0)) fail("battery capacity must be positive");
    if (!(power.battery.consumed_c >= 0.0 && power.battery.consumed_c < power.battery.capacity_c)) {
        fail("initial consumed charge must lie in [0, capacity)");
    }
    if (!(power.current.amps_per_percent >= 0.0)) fail("current draw must be non-negative");
    if (!(deposition.flow_rate_mm3ps >= 0.0)) fail("flow rate must be non-negative");
    if (!(deposition.adhesion_gap_limit_mm > 0.0)) fail("adhesion gap limit must be positive");
    if (!(nozzle.design_gap_mm >= 0.0 && nozzle.guard_radius_mm >= 0.0)) fail("nozzle geometry must be non-negative");
    if (!(mission.start_height_m > 0.0)) fail("start height must be positive");
    if (!(mission.descent_rate_mps > 0.0)) fail("descent rate must be positive");
    if (!(mission.corner_dwell_s >= 0.0)) fail("corner dwell must be non-negative");
    if (!(mission.contact_grace_s >= 0.0)) fail("contact grace period must be non-negative");
    if (!(mission.measurement_noise_m >= 0.0)) fail("measurement noise must be non-negative");
    if (!(mission.stop_at_v_remaining_pct >= 0.0 && mission.stop_at_v_remaining_pct < 100.0)) {
        fail("battery swap threshold must lie in [0, 100)");
    }
    if (mission.repeat_path && !(mission.stop_at_v_remaining_pct > 0.0)) {
        fail("repeat_path needs a battery swap threshold to terminate");
    }
    if (!(analysis.corner_radius_m > 0.0 && analysis.start_exclusion_m >= 0.0)) fail("analysis radii");
    if (!(max_duration_s > 0.0)) fail("max_duration must be positive");
    const double ratio = controller.control_dt_s / world.physics_dt_s;
    if (ratio < 1.0 || std::abs(ratio - std::round(ratio)) > 1e-6) {
        fail("control_dt must be an integer multiple of physics_dt");
    }
}

std::vector<std::string> builtin_scenario_names()
{
    return {"square", "square_dwell", "square_gated", "ut", "line", "discharge"};
}

Scenario builtin_scenario(const std::string& name)
{
    Scenario s;
    s.name = name;
    if (name == "square") {
        return s;
    }
    if (name == "square_dwell") {
        s.mission.corner_dwell_s = 3.0;
        return s;
    }
    if (name == "square_gated") {
        s.mission.corner_dwell_s = 3.0;
        s.mission.extrude_during_dwell = false;
        return s;
    }
    if (name == "ut") {
        s.path = builtin_path("UT");
        return s;
    }
    if (name == "line") {
        s.path = builtin_path("line");
        return s;
    }
    if (name == "discharge") {
        // Small pack so a 100% -> 40% sag fits in a couple of simulated minutes.
        s.path = builtin_path("square10cm");
        s.power.battery.capacity_c = 2400.0;
        s.mission.repeat_path = true;
        s.mission.stop_at_v_remaining_pct = 40.0;
        s.max_duration_s = 600.0;
        return s;
    }
    std::ostringstream msg;
    msg << "unknown scenario '" << name << "'; available:";
    for (const auto& n : builtin_scenario_names()) {
        msg << ' ' << n;
    }
    throw ValidationError(msg.str());
}

const char* to_string(RunStatus status)
{
    switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BatteryThreshold: return "battery_threshold";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::BatteryExhausted: return "battery_exhausted";
    case RunStatus::ContactLost: return "contact_lost";
    case RunStatus::NonFinite: return "non_finite";
    }
    return "unknown";
}

RunStatus run_status_from_string(const std::string& text)
{
    for (RunStatus s : {RunStatus::Completed, RunStatus::BatteryThreshold, RunStatus::Timeout,
                        RunStatus::BatteryExhausted, RunStatus::ContactLost, RunStatus::NonFinite}) {
        if (text == to_string(s)) {
            return s;
        }
    }
    throw ValidationError("unknown run status '" + text + "'");
}

bool succeeded(RunStatus status)
{
    return status == RunStatus::Completed || status == RunStatus::BatteryThreshold;
}

// ---------------------------------------------------------------------------
// Coupled simulation loop
// ---------------------------------------------------------------------------

namespace {

// Scripted approach: hold the first corner horizontally and sink at a constant rate.
ActuatorCommand descent_command(const HexState& state, Vec2 measured, Vec2 target, double efficiency,
                                const Scenario& sc)
{
    constexpr double kp = 40.0;        // deg/m
    constexpr double kd = 30.0;        // deg/(m/s)
    constexpr double tilt_limit = 10.0;
    constexpr double kv = 3.0;         // 1/s on vertical speed error

    const Vec2 err = target - measured;
    const double pitch_pd = std::clamp(kp * err.x - kd * state.velocity.x, -tilt_limit, tilt_limit);
    const double roll_pd = std::clamp(kp * err.y - kd * state.velocity.y, -tilt_limit, tilt_limit);

    ActuatorCommand cmd;
    cmd.pitch_deg = sc.controller.beta_theta_deg + pitch_pd;
    cmd.roll_deg = sc.controller.beta_phi_deg - roll_pd;
    const double tilt = std::cos(deg2rad(pitch_pd)) * std::cos(deg2rad(roll_pd));
    const double accel = kv * (-sc.mission.descent_rate_mps - state.velocity.z);
    const double percent = sc.world.hover_percent * (1.0 + accel / sc.world.gravity_mps2) / (tilt * efficiency);
    cmd.thrust_percent = std::clamp(percent, 0.0, 100.0);
    cmd.thrust_efficiency = efficiency;
    return cmd;
}

struct MissionLegs {
    std::deque<bool> extrude; // flag of each queued leg, parallel to ControllerState::corner_queue
    bool current = true;      // flag of the leg toward the current destination
};

void load_legs(const PrintPath& path, bool reversed, ControllerState& ctrl, MissionLegs& legs)
{
    const auto& w = path.waypoints;
    ctrl.corner_queue.clear();
    legs.extrude.clear();
    if (!reversed) {
        for (std::size_t i = 1; i < w.size(); ++i) {
            ctrl.corner_queue.push_back(w[i].position);
            legs.extrude.push_back(w[i].extrude);
        }
    } else {
        for (std::size_t i = w.size() - 1; i-- > 0;) {
            ctrl.corner_queue.push_back(w[i].position);
            legs.extrude.push_back(w[i + 1].extrude);
        }
    }
}

}  // namespace

RunTrace run_scenario(const Scenario& sc)
{
    sc.validate();

    RunTrace trace;
    trace.flow_rate_mm3ps = sc.deposition.flow_rate_mm3ps;
    trace.target = sc.path.strokes();
    trace.corners = sc.path.print_corners();
    trace.stroke_starts = sc.path.stroke_starts();
    trace.analysis = sc.analysis;

    const WorldParams& world = sc.world;
    const ControllerConfig& cfg = sc.controller;
    const double control_dt = cfg.control_dt_s;
    const auto substeps = static_cast<int>(std::llround(control_dt / world.physics_dt_s));
    const auto dwell_ticks = static_cast<long long>(std::llround(sc.mission.corner_dwell_s / control_dt));
    const auto grace_ticks = static_cast<long long>(std::llround(sc.mission.contact_grace_s / control_dt));

    const DischargeCurve discharge(sc.power.battery.v_max, sc.power.battery.v_min, sc.power.discharge_knots);
    BatteryState battery = sc.power.battery;
    battery.v_measured = discharge.voltage(1.0 - battery.consumed_c / battery.capacity_c);

    NoiseStream noise(sc.seed);
    const Vec2 first = sc.path.waypoints.front().position;

    HexState state;
    state.position = {first.x, first.y, world.surface_height_m + sc.mission.start_height_m};
    state.attitude_true = {cfg.beta_phi_deg - world.estimation_offset_deg.roll,
                           cfg.beta_theta_deg - world.estimation_offset_deg.pitch, 0.0};
    state.attitude_estimated = {cfg.beta_phi_deg, cfg.beta_theta_deg, 0.0};

    Phase phase = Phase::Descent;
    ControllerState ctrl;
    MissionLegs legs;
    bool reversed = false;
    double held_thrust = 0.0;
    long long dwell_count = 0;
    long long airborne_count = 0;

    trace.status = RunStatus::Timeout;
    for (long long tick = 0;; ++tick) {
        const double t = state.time;
        if (t >= sc.max_duration_s - 1e-9) {
            trace.status = RunStatus::Timeout;
            trace.diagnostic = "max_duration reached before the mission completed";
            break;
        }

        Vec2 measured = state.position.xy();
        if (sc.mission.measurement_noise_m > 0.0) {
            measured.x += sc.mission.measurement_noise_m * noise.gaussian();
            measured.y += sc.mission.measurement_noise_m * noise.gaussian();
        }
        const double v_rem = v_remaining(battery);
        const double efficiency = sc.power.efficiency.at(v_rem);

        if (phase == Phase::Descent && state.in_contact) {
            phase = Phase::Print;
            ++trace.handoffs;
            trace.handoff_time = t;
            ctrl = start_mission(sc.path.corners());
            legs.extrude.clear();
            for (std::size_t i = 2; i < sc.path.waypoints.size(); ++i) {
                legs.extrude.push_back(sc.path.waypoints[i].extrude);
            }
            legs.current = sc.path.waypoints[1].extrude;
            bool extrapolated = false;
            held_thrust = thrust_command(v_rem, sc.power.curve, &extrapolated);
            trace.thrust_extrapolated |= extrapolated;
        }

        ActuatorCommand cmd;
        bool extruding = false;
        if (phase == Phase::Descent) {
            cmd = descent_command(state, measured, first, efficiency, sc);
        } else {
            airborne_count = state.in_contact ? 0 : airborne_count + 1;
            if (airborne_count > grace_ticks) {
                trace.status = RunStatus::ContactLost;
                trace.diagnostic = "lost contact with the build surface beyond the grace period";
                break;
            }
            if (sc.mission.stop_at_v_remaining_pct > 0.0 && v_rem <= sc.mission.stop_at_v_remaining_pct) {
                trace.status = RunStatus::BatteryThreshold;
                break;
            }

            const bool ready = ctrl.setpoint == ctrl.destination
                               && (measured - ctrl.destination).norm() <= cfg.corner_tolerance_m;
            dwell_count = ready ? dwell_count + 1 : 0;
            if (ready && dwell_count > dwell_ticks) {
                if (advance_corner(ctrl, measured, cfg.corner_tolerance_m)) {
                    legs.current = legs.extrude.front();
                    legs.extrude.pop_front();
                    dwell_count = 0;
                } else if (ctrl.mission_complete) {
                    if (!sc.mission.repeat_path) {
                        trace.status = RunStatus::Completed;
                        break;
                    }
                    if (!sc.path.closed()) {
                        reversed = !reversed;
                    }
                    load_legs(sc.path, reversed, ctrl, legs);
                    ctrl.mission_complete = false;
                    advance_corner(ctrl, measured, cfg.corner_tolerance_m);
                    legs.current = legs.extrude.front();
                    legs.extrude.pop_front();
                    dwell_count = 0;
                }
            }

            ramp_setpoint(ctrl, cfg);
            const AttitudeCommand att = compute_attitude_command(measured, cfg, ctrl);
            cmd.roll_deg = att.roll_deg;
            cmd.pitch_deg = att.pitch_deg;
            if (sc.power.compensation) {
                bool extrapolated = false;
                cmd.thrust_percent = thrust_command(v_rem, sc.power.curve, &extrapolated);
                trace.thrust_extrapolated |= extrapolated;
            } else {
                cmd.thrust_percent = held_thrust;
            }
            cmd.thrust_percent = std::clamp(cmd.thrust_percent, 0.0, 100.0);
            cmd.thrust_efficiency = efficiency;

            const bool waiting = ctrl.setpoint == ctrl.destination;
            extruding = legs.current && (sc.mission.extrude_during_dwell || !waiting);
        }

        RunRecord rec;
        rec.time = t;
        rec.phase = phase;
        rec.position = state.position;
        rec.setpoint = phase == Phase::Print ? ctrl.setpoint : first;
        rec.roll_cmd_deg = cmd.roll_deg;
        rec.pitch_cmd_deg = cmd.pitch_deg;
        rec.thrust_cmd_pct = cmd.thrust_percent;
        rec.normal_force_n = state.normal_force;
        rec.voltage_v = battery.v_measured;
        rec.v_remaining_pct = v_rem;
        rec.in_contact = state.in_contact;
        rec.extruding = extruding;
        trace.records.push_back(rec);

        try {
            for (int i = 0; i < substeps; ++i) {
                state = step_world(state, cmd, world, noise);
                battery = discharge_step(battery, cmd.thrust_percent, world.physics_dt_s, discharge, sc.power.current);
            }
        } catch (const BatteryError& e) {
            trace.status = RunStatus::BatteryExhausted;
            trace.diagnostic = e.what();
            break;
        } catch (const SimulationError& e) {
            trace.status = RunStatus::NonFinite;
            trace.diagnostic = e.what();
            break;
        }

        if (phase == Phase::Print) {
            deposit_step(trace.bead, state.position.xy(), nozzle_gap(state, sc.nozzle), extruding, control_dt,
                         state.time, sc.deposition);
        }
    }
    trace.end_time = state.time;
    return trace;
}

std::vector<double> contact_normal_forces(const RunTrace& trace)
{
    // The handoff record still carries the force produced by the descent thrust.
    std::vector<double> out;
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        if (r.phase == Phase::Print && trace.records[i - 1].phase == Phase::Print && r.in_contact) {
            out.push_back(r.normal_force_n);
        }
    }
    return out;
}

PrintReport compute_report(const RunTrace& trace)
{
    PrintReport report;
    const Deviation dev = path_deviation(trace.bead, trace.target, trace.stroke_starts, trace.analysis.start_exclusion_m);
    report.max_deviation_m = dev.max;
    report.rms_deviation_m = dev.rms;
    report.clump_ratio = corner_clump_ratio(trace.bead, trace.corners, trace.analysis.corner_radius_m);
    report.gap_range_mm = gap_constancy(trace.bead).range_mm;
    report.normal_force_variation_pct = friction_variation(contact_normal_forces(trace));
    report.mission_time_s = trace.end_time - trace.handoff_time;
    return report;
}

DischargeComparison compare_discharge(const Scenario& scenario)
{
    DischargeComparison out;
    Scenario compensated = scenario;
    compensated.power.compensation = true;
    Scenario constant = scenario;
    constant.power.compensation = false;

    const RunTrace a = run_scenario(compensated);
    const RunTrace b = run_scenario(constant);
    out.compensated_status = a.status;
    out.constant_status = b.status;
    const auto forces_a = contact_normal_forces(a);
    const auto forces_b = contact_normal_forces(b);
    if (!forces_a.empty()) {
        out.v_remaining_start = a.records.front().v_remaining_pct;
        out.v_remaining_end = a.records.back().v_remaining_pct;
    }
    try {
        out.compensated_variation_pct = friction_variation(forces_a);
        out.constant_variation_pct = friction_variation(forces_b);
        out.complete = true;
    } catch (const AnalysisError& e) {
        out.diagnostic = e.what();
    }
    if (!succeeded(a.status) || !succeeded(b.status)) {
        out.complete = false;
        out.diagnostic += std::string(out.diagnostic.empty() ? "" : "; ") + "compensated run: " + to_string(a.status)
                          + ", constant run: " + to_string(b.status);
    }
    out.compensation_reduces = out.complete && out.compensated_variation_pct < out.constant_variation_pct;
    return out;
}

}  // namespace hexprint
