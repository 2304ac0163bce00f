#include "hexprint/world.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hexprint {

namespace {

bool finite_attitude(const Attitude& a)
{
    return std::isfinite(a.roll) && std::isfinite(a.pitch) && std::isfinite(a.yaw);
}

void check_inputs(const HexState& state, const ActuatorCommand& command)
{
    if (!state.position.finite() || !state.velocity.finite() || !finite_attitude(state.attitude_true)
        || !std::isfinite(state.normal_force) || !state.disturbance.finite()) {
        std::ostringstream msg;
        msg << "non-finite vehicle state at t=" << state.time;
        throw SimulationError(msg.str());
    }
    if (!std::isfinite(command.roll_deg) || !std::isfinite(command.pitch_deg)
        || !std::isfinite(command.thrust_efficiency)) {
        throw SimulationError("non-finite actuator command");
    }
    if (!(command.thrust_percent >= 0.0 && command.thrust_percent <= 100.0)) {
        std::ostringstream msg;
        msg << "thrust command " << command.thrust_percent << "% outside [0, 100]";
        throw SimulationError(msg.str());
    }
}

std::uint64_t steps_per_disturbance_update(const WorldParams& params)
{
    const double ratio = params.ground_effect_update_dt_s / params.physics_dt_s;
    return static_cast<std::uint64_t>(std::max(1.0, std::round(ratio)));
}

}  // namespace

void WorldParams::validate() const
{
    auto fail = [](const std::string& what) { throw SimulationError("invalid world parameters: " + what); };
    if (!(mass_kg > 0.0)) fail("mass must be positive");
    if (!(gravity_mps2 > 0.0)) fail("gravity must be positive");
    if (!(physics_dt_s > 0.0) || !std::isfinite(physics_dt_s)) fail("physics_dt must be positive");
    if (!(mu_kinetic >= 0.0)) fail("mu_kinetic must be non-negative");
    if (!(mu_static >= mu_kinetic)) fail("mu_static must be >= mu_kinetic");
    if (!(attitude_time_constant_s >= 0.0)) fail("attitude time constant must be non-negative");
    if (!(ground_effect_amplitude_n >= 0.0)) fail("ground effect amplitude must be non-negative");
    if (!(ground_effect_correlation_time_s > 0.0)) fail("ground effect correlation time must be positive");
    if (!(ground_effect_update_dt_s > 0.0)) fail("ground effect update interval must be positive");
    if (!(com_moment_arm_m > 0.0)) fail("com moment arm must be positive");
    if (!(hover_percent > 0.0 && hover_percent <= 100.0)) fail("hover_percent must be in (0, 100]");
    if (!(penetration_tolerance_m >= 0.0)) fail("penetration tolerance must be non-negative");
    if (!(stick_speed_mps >= 0.0)) fail("stick speed must be non-negative");
    if (!std::isfinite(estimation_offset_deg.roll) || !std::isfinite(estimation_offset_deg.pitch)) {
        fail("estimation offset must be finite");
    }
    if (!com_offset_m.finite() || !std::isfinite(surface_height_m)) fail("non-finite geometry");
}

double thrust_newtons(double thrust_percent, double efficiency, const WorldParams& params)
{
    return thrust_percent / params.hover_percent * params.mass_kg * params.gravity_mps2 * efficiency;
}

Vec2 ground_effect(NoiseStream& noise, const WorldParams& params, double dt, Vec2 previous)
{
    if (!(dt > 0.0)) {
        throw SimulationError("ground_effect requires dt > 0");
    }
    const double sigma = params.ground_effect_amplitude_n;
    if (sigma == 0.0) {
        return {0.0, 0.0};
    }
    // Exact discretisation of dF = -F/tau dt + sigma*sqrt(2/tau) dW.
    const double decay = std::exp(-dt / params.ground_effect_correlation_time_s);
    const double spread = sigma * std::sqrt(1.0 - decay * decay);
    const double nx = noise.gaussian();
    const double ny = noise.gaussian();
    return {previous.x * decay + spread * nx, previous.y * decay + spread * ny};
}

HexState resolve_contact(const HexState& state, const ContactLoad& load, const WorldParams& params)
{
    const double dt = params.physics_dt_s;
    const double weight = params.mass_kg * params.gravity_mps2;

    HexState out = state;
    out.position.z = params.surface_height_m;
    out.velocity.z = 0.0;
    out.normal_force = std::max(0.0, weight - load.vertical_thrust);
    out.in_contact = out.normal_force > 0.0;

    const Vec2 v = state.velocity.xy();
    const double speed = v.norm();
    const Vec2 force = load.lateral_force;
    const double force_mag = force.norm();
    const double normal = out.normal_force;

    Vec2 v_next;
    if (speed < params.stick_speed_mps && force_mag <= params.mu_static * normal) {
        v_next = {0.0, 0.0};
    } else {
        Vec2 dir;
        if (speed >= params.stick_speed_mps) {
            dir = v * (1.0 / speed);
        } else if (force_mag > 0.0) {
            dir = force * (1.0 / force_mag);
        }
        const Vec2 accel = (force - dir * (params.mu_kinetic * normal)) * (1.0 / params.mass_kg);
        v_next = v + accel * dt;
        // Kinetic friction can stop the guard but never push it backwards.
        if (speed >= params.stick_speed_mps && v_next.dot(dir) <= 0.0 && force_mag <= params.mu_static * normal) {
            v_next = {0.0, 0.0};
        }
    }

    out.velocity.x = v_next.x;
    out.velocity.y = v_next.y;
    out.position.x += v_next.x * dt;
    out.position.y += v_next.y * dt;
    return out;
}

HexState step_world(const HexState& state, const ActuatorCommand& command,
                    const WorldParams& params, NoiseStream& noise)
{
    check_inputs(state, command);
    const double dt = params.physics_dt_s;
    if (!(dt > 0.0)) {
        throw SimulationError("physics_dt must be positive");
    }

    HexState next = state;

    // Inner attitude loop: the flight stack tracks the command in its own (offset) estimate.
    const double tau = params.attitude_time_constant_s;
    const double blend = tau > 0.0 ? 1.0 - std::exp(-dt / tau) : 1.0;
    const Attitude& offset = params.estimation_offset_deg;
    const double roll_target = command.roll_deg - offset.roll;
    const double pitch_target = command.pitch_deg - offset.pitch;
    next.attitude_true.roll += (roll_target - state.attitude_true.roll) * blend;
    next.attitude_true.pitch += (pitch_target - state.attitude_true.pitch) * blend;
    next.attitude_true.yaw = 0.0;
    next.attitude_estimated.roll = next.attitude_true.roll + offset.roll;
    next.attitude_estimated.pitch = next.attitude_true.pitch + offset.pitch;
    next.attitude_estimated.yaw = 0.0;

    const std::uint64_t every = steps_per_disturbance_update(params);
    if (state.step_index % every == 0) {
        next.disturbance = ground_effect(noise, params, static_cast<double>(every) * dt, state.disturbance);
    }

    const double thrust = thrust_newtons(command.thrust_percent, command.thrust_efficiency, params);
    const double roll = deg2rad(next.attitude_true.roll);
    const double pitch = deg2rad(next.attitude_true.pitch);
    const double vertical_thrust = thrust * std::cos(roll) * std::cos(pitch);

    Vec2 lateral{thrust * std::cos(roll) * std::sin(pitch), -thrust * std::sin(roll)};
    if (state.position.z - params.surface_height_m < params.ground_effect_height_m) {
        lateral += next.disturbance;
    }
    lateral += params.com_offset_m * (vertical_thrust / params.com_moment_arm_m);

    const double weight = params.mass_kg * params.gravity_mps2;
    next.step_index = state.step_index + 1;
    next.time = static_cast<double>(next.step_index) * dt;

    if (state.in_contact && vertical_thrust < weight) {
        HexState resolved = resolve_contact(state, ContactLoad{lateral, vertical_thrust}, params);
        next.position = resolved.position;
        next.velocity = resolved.velocity;
        next.normal_force = resolved.normal_force;
        next.in_contact = resolved.in_contact;
        return next;
    }

    // Free flight, semi-implicit Euler.
    next.in_contact = false;
    next.normal_force = 0.0;
    next.velocity.x += lateral.x / params.mass_kg * dt;
    next.velocity.y += lateral.y / params.mass_kg * dt;
    next.velocity.z += (vertical_thrust - weight) / params.mass_kg * dt;
    next.position.x += next.velocity.x * dt;
    next.position.y += next.velocity.y * dt;
    next.position.z += next.velocity.z * dt;

    if (next.position.z <= params.surface_height_m + params.penetration_tolerance_m && next.velocity.z <= 0.0) {
        next.position.z = params.surface_height_m;
        next.velocity.z = 0.0;
        next.normal_force = std::max(0.0, weight - vertical_thrust);
        next.in_contact = next.normal_force > 0.0;
    }
    return next;
}

}  // namespace hexprint
