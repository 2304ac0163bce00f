#pragma once

#include <deque>
#include <stdexcept>
#include <vector>

#include "hexprint/geometry.hpp"
#include "hexprint/world.hpp"

namespace hexprint {

class ControllerError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Gains of one horizontal axis: deg/m, deg/(m s), deg s/m.
struct AxisGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

struct ControllerConfig {
    // Tuned in-repo against the square10cm scenario with default world parameters.
    AxisGains pitch{400.0, 250.0, 60.0};
    AxisGains roll{400.0, 250.0, 60.0};
    double alpha_lim_deg = 5.0;
    double beta_theta_deg = 0.0; // pitch bias
    double beta_phi_deg = 0.0;   // roll bias
    double control_dt_s = 0.02;
    double sliding_speed_mps = 0.02;
    double corner_tolerance_m = 0.01;
    bool anti_windup = true;

    void validate() const;
};

/// Integral and derivative memory of one axis.
struct AxisMemory {
    double integral = 0.0;       // m s
    double previous_error = 0.0; // m
    bool primed = false;         // false until the first update
};

struct ControllerState {
    AxisMemory x;
    AxisMemory y;
    Vec2 setpoint;
    Vec2 destination;
    std::deque<Vec2> corner_queue;
    bool mission_complete = false;
};

struct AttitudeCommand {
    double roll_deg = 0.0;
    double pitch_deg = 0.0;
    double yaw_deg = 0.0;
};

/// kp e + ki i + kd d + bias, updating the axis memory. Not clamped.
double pid_step(double error, AxisMemory& memory, const AxisGains& gains, double dt, double bias);

/// Saturates to [bias - alpha_lim, bias + alpha_lim].
double clamp_attitude(double unclamped, double alpha_lim, double bias);

/// Pitch from the x error, roll (sign flipped) from the y error. Yaw is always zero.
AttitudeCommand compute_attitude_command(Vec2 measured, const ControllerConfig& config, ControllerState& state);

/// Moves the setpoint toward the destination by sliding_speed * control_dt without overshoot.
Vec2 ramp_setpoint(ControllerState& state, const ControllerConfig& config);

/// Loads the next corner once the setpoint sits on the destination and the vehicle is
/// within tolerance of it. Marks the mission complete when the queue is exhausted.
bool advance_corner(ControllerState& state, Vec2 measured, double tolerance);

/// Controller state primed for a corner sequence: setpoint on the first corner,
/// destination on the second, the rest queued.
ControllerState start_mission(const std::vector<Vec2>& corners);

// ---------------------------------------------------------------------------
// Hover bias calibration
// ---------------------------------------------------------------------------

struct CalibrationOptions {
    double hover_height_m = 3.0;
    double settling_window_s = 3.0;
    double drift_tolerance_mps = 0.01;
    int max_iterations = 20;
    double step_fraction = 0.8; // fraction of the estimated correction applied per iteration
    std::uint64_t seed = 1;
};

struct CalibrationIteration {
    double roll_cmd_deg = 0.0;
    double pitch_cmd_deg = 0.0;
    Vec2 drift_velocity;  // m/s, mean over the settling window
    double drift_speed = 0.0;
};

struct CalibrationResult {
    bool converged = false;
    double beta_phi_deg = 0.0;
    double beta_theta_deg = 0.0;
    std::vector<CalibrationIteration> iterations;
};

/// Holds the given roll/pitch in hover for one settling window and returns the
/// mean horizontal drift velocity.
Vec2 measure_hover_drift(const WorldParams& world, double roll_cmd_deg, double pitch_cmd_deg,
                         const CalibrationOptions& options);

/// Iterates commanded roll/pitch against the observed drift until the vehicle no
/// longer drifts; the final commands are the controller biases.
CalibrationResult calibrate_bias(const WorldParams& world, double initial_roll_deg, double initial_pitch_deg,
                                 const CalibrationOptions& options);

}  // namespace hexprint
