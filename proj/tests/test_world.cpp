#include "doctest.h"

#include <cmath>
#include <vector>

#include "hexprint/world.hpp"

using namespace hexprint;

namespace {

WorldParams quiet_world()
{
    WorldParams w;
    w.ground_effect_amplitude_n = 0.0;
    return w;
}

HexState resting_on_surface(const WorldParams& w)
{
    HexState s;
    s.position = {0.0, 0.0, w.surface_height_m};
    s.in_contact = true;
    return s;
}

}  // namespace

TEST_CASE("hover at hover_percent leaves the state unchanged")
{
    const WorldParams w = quiet_world();
    NoiseStream noise(1);
    HexState s;
    s.position = {0.3, -0.2, 2.0};
    const HexState start = s;
    ActuatorCommand cmd{w.hover_percent, 0.0, 0.0, 1.0};
    for (int i = 0; i < 5000; ++i) {
        s = step_world(s, cmd, w, noise);
    }
    CHECK(std::abs(s.position.x - start.position.x) <= 1e-12);
    CHECK(std::abs(s.position.y - start.position.y) <= 1e-12);
    CHECK(std::abs(s.position.z - start.position.z) <= 1e-12);
    CHECK_FALSE(s.in_contact);
}

TEST_CASE("free fall matches -g t")
{
    const WorldParams w = quiet_world();
    NoiseStream noise(1);
    HexState s;
    s.position = {0.0, 0.0, 100.0};
    const ActuatorCommand cmd{0.0, 0.0, 0.0, 1.0};
    const int n = 1500;
    for (int i = 0; i < n; ++i) {
        s = step_world(s, cmd, w, noise);
    }
    const double t = n * w.physics_dt_s;
    CHECK(s.velocity.z == doctest::Approx(-w.gravity_mps2 * t).epsilon(1e-12));
    CHECK(s.time == doctest::Approx(t));
}

TEST_CASE("contact support: normal force is weight minus thrust")
{
    const WorldParams w = quiet_world();
    NoiseStream noise(1);
    HexState s = resting_on_surface(w);
    const double percent = 0.8 * w.hover_percent;
    s = step_world(s, {percent, 0.0, 0.0, 1.0}, w, noise);
    const double thrust = thrust_newtons(percent, 1.0, w);
    CHECK(s.in_contact);
    CHECK(s.normal_force == doctest::Approx(w.mass_kg * w.gravity_mps2 - thrust).epsilon(1e-14));
    CHECK(s.position.z == w.surface_height_m);
}

TEST_CASE("resolve_contact: stiction holds below mu_s N")
{
    const WorldParams w = quiet_world();
    HexState s = resting_on_surface(w);
    const double thrust = 0.6 * w.mass_kg * w.gravity_mps2;
    const double normal = w.mass_kg * w.gravity_mps2 - thrust;
    const ContactLoad load{{0.99 * w.mu_static * normal, 0.0}, thrust};
    for (int i = 0; i < 10000; ++i) {
        s = resolve_contact(s, load, w);
        REQUIRE(s.velocity.x == 0.0);
        REQUIRE(s.velocity.y == 0.0);
    }
    CHECK(s.position.x == 0.0);
    CHECK(s.normal_force == doctest::Approx(normal));
}

TEST_CASE("resolve_contact: kinetic friction decelerates a sliding guard")
{
    const WorldParams w = quiet_world();
    HexState s = resting_on_surface(w);
    s.velocity = {0.05, 0.0, 0.0};
    const double thrust = 0.7 * w.mass_kg * w.gravity_mps2;
    const double normal = w.mass_kg * w.gravity_mps2 - thrust;
    const double force = 2.0 * w.mu_kinetic * normal;
    const HexState next = resolve_contact(s, {{force, 0.0}, thrust}, w);
    const double accel = (next.velocity.x - s.velocity.x) / w.physics_dt_s;
    CHECK(accel == doctest::Approx((force - w.mu_kinetic * normal) / w.mass_kg).epsilon(1e-9));
    CHECK(next.velocity.y == 0.0);
}

TEST_CASE("resolve_contact: thrust at or above weight releases contact without friction")
{
    const WorldParams w = quiet_world();
    HexState s = resting_on_surface(w);
    s.velocity = {0.05, 0.0, 0.0};
    const double weight = w.mass_kg * w.gravity_mps2;
    const HexState next = resolve_contact(s, {{0.0, 0.0}, weight}, w);
    CHECK(next.normal_force == 0.0);
    CHECK_FALSE(next.in_contact);
    CHECK(next.velocity.x == s.velocity.x);
}

TEST_CASE("resolve_contact: friction never reverses the motion")
{
    const WorldParams w = quiet_world();
    HexState s = resting_on_surface(w);
    s.velocity = {1e-3, 0.0, 0.0};
    const double thrust = 0.5 * w.mass_kg * w.gravity_mps2;
    for (int i = 0; i < 200; ++i) {
        s = resolve_contact(s, {{0.0, 0.0}, thrust}, w);
        REQUIRE(s.velocity.x >= 0.0);
    }
    CHECK(s.velocity.x == 0.0);
}

TEST_CASE("step_world keeps contact complementarity and the estimation offset")
{
    WorldParams w;
    w.estimation_offset_deg = {-0.7, 1.3, 0.0};
    NoiseStream noise(42);
    HexState s = resting_on_surface(w);
    for (int i = 0; i < 20000; ++i) {
        const double roll = 4.0 * std::sin(i * 1e-3);
        const double pitch = 4.0 * std::cos(i * 7e-4);
        const double percent = 40.0 + 15.0 * std::sin(i * 3e-4); // occasionally above hover
        s = step_world(s, {percent, roll, pitch, 1.0}, w, noise);
        REQUIRE(s.attitude_estimated.roll - s.attitude_true.roll == doctest::Approx(-0.7).epsilon(1e-12));
        REQUIRE(s.attitude_estimated.pitch - s.attitude_true.pitch == doctest::Approx(1.3).epsilon(1e-12));
        REQUIRE(s.attitude_true.yaw == 0.0);
        REQUIRE(s.normal_force >= 0.0);
        if (s.normal_force > 0.0) {
            REQUIRE(std::abs(s.position.z - w.surface_height_m) <= w.penetration_tolerance_m);
        }
        if (s.position.z > w.surface_height_m + w.penetration_tolerance_m) {
            REQUIRE(s.normal_force == 0.0);
        }
    }
}

TEST_CASE("inner attitude loop settles on command minus offset")
{
    WorldParams w = quiet_world();
    w.estimation_offset_deg = {0.5, -1.0, 0.0};
    NoiseStream noise(1);
    HexState s;
    s.position = {0, 0, 5};
    for (int i = 0; i < 3000; ++i) {
        s = step_world(s, {w.hover_percent, 2.0, 3.0, 1.0}, w, noise);
    }
    CHECK(s.attitude_true.roll == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(s.attitude_true.pitch == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(s.attitude_estimated.roll == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("free-flight energy drift shrinks with the timestep")
{
    auto drift_per_second = [](double dt) {
        WorldParams w = quiet_world();
        w.physics_dt_s = dt;
        NoiseStream noise(1);
        HexState s;
        s.position = {0, 0, 500};
        s.velocity = {0.3, -0.2, 1.0};
        auto energy = [&](const HexState& st) {
            const double v2 = st.velocity.x * st.velocity.x + st.velocity.y * st.velocity.y
                              + st.velocity.z * st.velocity.z;
            return 0.5 * w.mass_kg * v2 + w.mass_kg * w.gravity_mps2 * st.position.z;
        };
        const double e0 = energy(s);
        const int n = static_cast<int>(std::lround(2.0 / dt));
        for (int i = 0; i < n; ++i) {
            s = step_world(s, {0.0, 0.0, 0.0, 1.0}, w, noise);
        }
        return std::abs(energy(s) - e0) / 2.0;
    };
    const double coarse = drift_per_second(2e-3);
    const double fine = drift_per_second(1e-3);
    CHECK(fine < coarse);
}

TEST_CASE("step_world rejects bad input")
{
    WorldParams w = quiet_world();
    NoiseStream noise(1);
    HexState s;
    s.position = {0, 0, 1};
    CHECK_THROWS_AS(step_world(s, {120.0, 0, 0, 1}, w, noise), SimulationError);
    CHECK_THROWS_AS(step_world(s, {50.0, NAN, 0, 1}, w, noise), SimulationError);
    s.velocity.x = INFINITY;
    CHECK_THROWS_AS(step_world(s, {50.0, 0, 0, 1}, w, noise), SimulationError);
    s.velocity.x = 0;
    w.physics_dt_s = -1e-3;
    CHECK_THROWS_AS(step_world(s, {50.0, 0, 0, 1}, w, noise), SimulationError);
}

TEST_CASE("world parameter validation")
{
    WorldParams w;
    w.mu_static = 0.2;
    w.mu_kinetic = 0.3;
    CHECK_THROWS_AS(w.validate(), SimulationError);
    w = WorldParams{};
    w.mass_kg = 0.0;
    CHECK_THROWS_AS(w.validate(), SimulationError);
    CHECK_NOTHROW(WorldParams{}.validate());
}

TEST_CASE("ground effect: zero amplitude is exactly zero")
{
    WorldParams w;
    w.ground_effect_amplitude_n = 0.0;
    NoiseStream noise(3);
    Vec2 f;
    for (int i = 0; i < 100; ++i) {
        f = ground_effect(noise, w, 0.02, f);
        REQUIRE(f.x == 0.0);
        REQUIRE(f.y == 0.0);
    }
    CHECK_THROWS_AS(ground_effect(noise, w, 0.0, f), SimulationError);
}

TEST_CASE("ground effect: same seed gives the same sequence")
{
    const WorldParams w;
    NoiseStream a(99), b(99);
    Vec2 fa, fb;
    for (int i = 0; i < 1000; ++i) {
        fa = ground_effect(a, w, 0.02, fa);
        fb = ground_effect(b, w, 0.02, fb);
        REQUIRE(fa == fb);
    }
}

TEST_CASE("ground effect: long-run mean and spread")
{
    // Monte Carlo oracle. With correlation time tau and step dt the variance of the
    // sample mean of an AR(1) stream is sigma^2/n * (1+rho)/(1-rho), rho = exp(-dt/tau).
    const WorldParams w;
    const double dt = 0.02;
    const int n = 1000000;
    NoiseStream noise(2024);
    Vec2 f;
    double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0;
    for (int i = 0; i < n; ++i) {
        f = ground_effect(noise, w, dt, f);
        sum_x += f.x;
        sum_y += f.y;
        sum_xx += f.x * f.x;
    }
    const double sigma = w.ground_effect_amplitude_n;
    const double rho = std::exp(-dt / w.ground_effect_correlation_time_s);
    const double standard_error = sigma * std::sqrt((1.0 + rho) / (1.0 - rho) / n);
    CHECK(std::abs(sum_x / n) < 5.0 * standard_error);
    CHECK(std::abs(sum_y / n) < 5.0 * standard_error);
    CHECK(std::sqrt(sum_xx / n) == doctest::Approx(sigma).epsilon(0.02));
}

TEST_CASE("step_world is deterministic for a seed")
{
    const WorldParams w;
    auto run = [&](std::uint64_t seed) {
        NoiseStream noise(seed);
        HexState s;
        s.position = {0, 0, 0.01};
        std::vector<Vec3> out;
        for (int i = 0; i < 3000; ++i) {
            s = step_world(s, {44.0, 1.0, -2.0, 1.0}, w, noise);
            out.push_back(s.position);
        }
        return out;
    };
    CHECK(run(5) == run(5));
    CHECK(run(5) != run(6));
}
