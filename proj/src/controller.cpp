#include "hexprint/controller.hpp"

#include <algorithm>
#include <cmath>

namespace hexprint {

void ControllerConfig::validate() const
{
    auto fail = [](const char* what) { throw ControllerError(std::string("invalid controller config: ") + what); };
    for (const AxisGains* g : {&pitch, &roll}) {
        if (!std::isfinite(g->kp) || !std::isfinite(g->ki) || !std::isfinite(g->kd)) fail("gains must be finite");
    }
    if (!(alpha_lim_deg > 0.0)) fail("alpha_lim must be positive");
    if (!(control_dt_s > 0.0)) fail("control_dt must be positive");
    if (!(sliding_speed_mps > 0.0)) fail("sliding_speed must be positive");
    if (!(corner_tolerance_m > 0.0)) fail("corner tolerance must be positive");
    if (!std::isfinite(beta_theta_deg) || !std::isfinite(beta_phi_deg)) fail("biases must be finite");
}

namespace {

// kp e + ki i + kd d with i and d advanced by one controller step.
double pid_terms(double error, AxisMemory& memory, const AxisGains& gains, double dt)
{
    if (!std::isfinite(error)) {
        throw ControllerError("non-finite position error");
    }
    if (!(dt > 0.0)) {
        throw ControllerError("controller dt must be positive");
    }
    if (!memory.primed) {
        memory.previous_error = error;
        memory.primed = true;
    }
    memory.integral += dt * error;
    const double derivative = (error - memory.previous_error) / dt;
    memory.previous_error = error;
    return gains.kp * error + gains.ki * memory.integral + gains.kd * derivative;
}

bool saturated(double unclamped, double alpha_lim, double bias)
{
    return unclamped >= alpha_lim + bias || unclamped <= bias - alpha_lim;
}

}  // namespace

double pid_step(double error, AxisMemory& memory, const AxisGains& gains, double dt, double bias)
{
    return pid_terms(error, memory, gains, dt) + bias;
}

double clamp_attitude(double unclamped, double alpha_lim, double bias)
{
    if (unclamped >= alpha_lim + bias) {
        return alpha_lim + bias;
    }
    if (unclamped <= bias - alpha_lim) {
        return bias - alpha_lim;
    }
    return unclamped;
}

AttitudeCommand compute_attitude_command(Vec2 measured, const ControllerConfig& config, ControllerState& state)
{
    const double dt = config.control_dt_s;
    const double ex = state.setpoint.x - measured.x;
    const double ey = state.setpoint.y - measured.y;

    const double ix_before = state.x.integral;
    const double iy_before = state.y.integral;

    const double pitch_raw = pid_terms(ex, state.x, config.pitch, dt) + config.beta_theta_deg;
    const double roll_raw = config.beta_phi_deg - pid_terms(ey, state.y, config.roll, dt);

    if (config.anti_windup) {
        if (saturated(pitch_raw, config.alpha_lim_deg, config.beta_theta_deg)) {
            state.x.integral = ix_before;
        }
        if (saturated(roll_raw, config.alpha_lim_deg, config.beta_phi_deg)) {
            state.y.integral = iy_before;
        }
    }

    AttitudeCommand cmd;
    cmd.pitch_deg = clamp_attitude(pitch_raw, config.alpha_lim_deg, config.beta_theta_deg);
    cmd.roll_deg = clamp_attitude(roll_raw, config.alpha_lim_deg, config.beta_phi_deg);
    cmd.yaw_deg = 0.0;
    return cmd;
}

Vec2 ramp_setpoint(ControllerState& state, const ControllerConfig& config)
{
    const Vec2 delta = state.destination - state.setpoint;
    const double remaining = delta.norm();
    const double step = config.sliding_speed_mps * config.control_dt_s;
    if (remaining <= step) {
        state.setpoint = state.destination;
    } else {
        state.setpoint = state.setpoint + delta * (step / remaining);
    }
    return state.setpoint;
}

bool advance_corner(ControllerState& state, Vec2 measured, double tolerance)
{
    if (!(state.setpoint == state.destination)) {
        return false;
    }
    if ((measured - state.destination).norm() > tolerance) {
        return false;
    }
    if (state.corner_queue.empty()) {
        state.mission_complete = true;
        return false;
    }
    state.destination = state.corner_queue.front();
    state.corner_queue.pop_front();
    return true;
}

ControllerState start_mission(const std::vector<Vec2>& corners)
{
    if (corners.size() < 2) {
        throw ControllerError("a print mission needs at least two corners");
    }
    ControllerState state;
    state.setpoint = corners[0];
    state.destination = corners[1];
    state.corner_queue.assign(corners.begin() + 2, corners.end());
    return state;
}

// ---------------------------------------------------------------------------

Vec2 measure_hover_drift(const WorldParams& world, double roll_cmd_deg, double pitch_cmd_deg,
                         const CalibrationOptions& options)
{
    world.validate();
    NoiseStream noise(options.seed);

    HexState state;
    state.position = {0.0, 0.0, world.surface_height_m + options.hover_height_m};
    // Start with the inner loop already settled on the command.
    state.attitude_true = {roll_cmd_deg - world.estimation_offset_deg.roll,
                           pitch_cmd_deg - world.estimation_offset_deg.pitch, 0.0};
    state.attitude_estimated = {roll_cmd_deg, pitch_cmd_deg, 0.0};

    const double target_z = state.position.z;
    const auto steps = static_cast<std::uint64_t>(std::llround(options.settling_window_s / world.physics_dt_s));
    const Vec2 start = state.position.xy();

    ActuatorCommand cmd;
    cmd.roll_deg = roll_cmd_deg;
    cmd.pitch_deg = pitch_cmd_deg;
    const double tilt = std::cos(deg2rad(roll_cmd_deg)) * std::cos(deg2rad(pitch_cmd_deg));
    for (std::uint64_t k = 0; k < steps; ++k) {
        // Altitude hold: PD on height around the hover command.
        const double accel = 4.0 * (target_z - state.position.z) - 3.0 * state.velocity.z;
        const double percent = world.hover_percent * (1.0 + accel / world.gravity_mps2) / tilt;
        cmd.thrust_percent = std::clamp(percent, 0.0, 100.0);
        state = step_world(state, cmd, world, noise);
    }
    const double window = static_cast<double>(steps) * world.physics_dt_s;
    return (state.position.xy() - start) * (1.0 / window);
}

CalibrationResult calibrate_bias(const WorldParams& world, double initial_roll_deg, double initial_pitch_deg,
                                 const CalibrationOptions& options)
{
    if (options.max_iterations <= 0 || !(options.settling_window_s > 0.0) || !(options.drift_tolerance_mps > 0.0)) {
        throw ControllerError("invalid calibration options");
    }
    // Mean drift speed over a window starting at rest, per degree of residual tilt.
    const double sensitivity = world.gravity_mps2 * std::tan(deg2rad(1.0)) * options.settling_window_s / 2.0;
    const double gain = options.step_fraction / sensitivity;

    CalibrationResult result;
    double roll = initial_roll_deg;
    double pitch = initial_pitch_deg;
    for (int it = 0; it < options.max_iterations; ++it) {
        const Vec2 drift = measure_hover_drift(world, roll, pitch, options);
        CalibrationIteration rec{roll, pitch, drift, drift.norm()};
        result.iterations.push_back(rec);
        result.beta_phi_deg = roll;
        result.beta_theta_deg = pitch;
        if (rec.drift_speed < options.drift_tolerance_mps) {
            result.converged = true;
            return result;
        }
        // Positive pitch pushes +x, positive roll pushes -y.
        pitch -= gain * drift.x;
        roll += gain * drift.y;
    }
    return result;
}

}  // namespace hexprint
