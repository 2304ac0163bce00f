#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "hexprint/geometry.hpp"

namespace hexprint {

/// Raised when a simulation input is rejected (non-finite state, bad parameters).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Roll/pitch/yaw in degrees. Yaw is carried for completeness and held at zero.
struct Attitude {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;

    constexpr bool operator==(const Attitude&) const = default;
};

struct HexState {
    Vec3 position;               // m, east-north-up
    Vec3 velocity;               // m/s
    Attitude attitude_true;      // deg
    Attitude attitude_estimated; // deg, always attitude_true + estimation offset
    bool in_contact = false;
    double normal_force = 0.0;   // N
    double time = 0.0;           // s
    Vec2 disturbance;            // N, current ground-effect force (held between updates)
    std::uint64_t step_index = 0;
};

struct WorldParams {
    double mass_kg = 2.5;
    double gravity_mps2 = 9.81;
    double surface_height_m = 0.0;
    double mu_static = 0.45;
    double mu_kinetic = 0.35;
    double attitude_time_constant_s = 0.15;
    Attitude estimation_offset_deg;          // roll/pitch used, yaw ignored
    double ground_effect_amplitude_n = 0.1;  // stationary std-dev per axis
    double ground_effect_correlation_time_s = 0.3;
    double ground_effect_height_m = 0.5;     // disturbance only acts below this height
    double ground_effect_update_dt_s = 0.02; // OU process is sampled on this grid
    Vec2 com_offset_m;                       // residual center-of-mass offset
    double com_moment_arm_m = 0.25;          // converts com offset into an equivalent force
    double hover_percent = 50.0;             // thrust percent that balances weight at full efficiency
    double physics_dt_s = 0.001;
    double penetration_tolerance_m = 1e-9;
    double stick_speed_mps = 1e-4;           // below this speed the guard can stick

    /// Throws SimulationError when an invariant is violated.
    void validate() const;
};

/// Seeded normal-variate source. One per run; never shared.
class NoiseStream {
public:
    explicit NoiseStream(std::uint64_t seed) : engine_(seed) {}

    double gaussian() { return normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// What the flight stack is asked to do for one physics step.
struct ActuatorCommand {
    double thrust_percent = 0.0;   // [0, 100]
    double roll_deg = 0.0;
    double pitch_deg = 0.0;
    double thrust_efficiency = 1.0; // battery-dependent scale on the thrust produced
};

/// Newtons produced by a thrust percentage. Affine (through zero) and anchored so that
/// hover_percent at full efficiency equals the vehicle weight.
double thrust_newtons(double thrust_percent, double efficiency, const WorldParams& params);

/// Advances the state by params.physics_dt_s.
HexState step_world(const HexState& state, const ActuatorCommand& command,
                    const WorldParams& params, NoiseStream& noise);

/// Inputs for the contact solver that are not part of the state.
struct ContactLoad {
    Vec2 lateral_force;            // N, everything except friction
    double vertical_thrust = 0.0;  // N, upward thrust component
};

/// Clamps the vehicle to the surface, computes the normal force and applies
/// Coulomb stiction/kinetic friction over one physics step. `state.velocity`
/// is the velocity at the start of the step.
HexState resolve_contact(const HexState& state, const ContactLoad& load, const WorldParams& params);

/// One Ornstein-Uhlenbeck update of the lateral ground-effect force.
Vec2 ground_effect(NoiseStream& noise, const WorldParams& params, double dt, Vec2 previous);

}  // namespace hexprint
