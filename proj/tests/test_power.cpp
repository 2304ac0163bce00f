#include "doctest.h"

#include <cmath>
#include <random>

#include "hexprint/power.hpp"

using namespace hexprint;

TEST_CASE("v_remaining endpoints and midpoint")
{
    BatteryState b;
    b.v_measured = b.v_max;
    CHECK(v_remaining(b) == doctest::Approx(100.0).epsilon(1e-12));
    b.v_measured = b.v_min;
    CHECK(v_remaining(b) == 0.0);
    b.v_measured = 0.5 * (b.v_max + b.v_min);
    CHECK(v_remaining(b) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("v_remaining matches the closed form at random points")
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> lo(3.0, 14.0), span(0.5, 10.0), frac(-0.1, 1.1);
    for (int i = 0; i < 100; ++i) {
        BatteryState b;
        b.v_min = lo(rng);
        b.v_max = b.v_min + span(rng);
        b.v_measured = b.v_min + frac(rng) * (b.v_max - b.v_min);
        const double expected = 100.0 * (b.v_measured - b.v_min) / (b.v_max - b.v_min);
        REQUIRE(std::abs(v_remaining(b) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("v_remaining rejects a degenerate span")
{
    BatteryState b;
    b.v_max = b.v_min = 14.0;
    CHECK_THROWS_AS(v_remaining(b), BatteryError);
}

TEST_CASE("thrust_command matches the compensation cubic at reference points")
{
    const ThrustCurve c;
    CHECK(std::abs(thrust_command(62.0, c) - 47.0) < 1e-9);
    CHECK(std::abs(thrust_command(100.0, c) - 43.70768) < 1e-9);
    CHECK(std::abs(thrust_command(40.0, c) - 47.63888) < 1e-9);
}

TEST_CASE("thrust_command is non-increasing in v")
{
    const ThrustCurve c;
    double prev = thrust_command(0.0, c);
    for (int i = 1; i <= 1000; ++i) {
        const double t = thrust_command(i * 0.1, c);
        REQUIRE(t <= prev + 1e-15);
        prev = t;
    }
}

TEST_CASE("thrust_command flags extrapolation outside the plotted range")
{
    const ThrustCurve c;
    bool flag = true;
    thrust_command(60.0, c, &flag);
    CHECK_FALSE(flag);
    thrust_command(20.0, c, &flag);
    CHECK(flag);
}

TEST_CASE("flat cubic gives a constant command")
{
    ThrustCurve c;
    c.a = 0.0;
    CHECK(thrust_command(10.0, c) == c.b);
    CHECK(thrust_command(99.0, c) == c.b);
}

TEST_CASE("discharge curve endpoints and monotonicity")
{
    const auto curve = DischargeCurve::lipo_default(16.8, 13.2);
    CHECK(curve.voltage(1.0) == doctest::Approx(16.8).epsilon(1e-14));
    CHECK(curve.voltage(0.0) == doctest::Approx(13.2).epsilon(1e-14));
    double prev = curve.voltage(0.0);
    for (int i = 1; i <= 10000; ++i) {
        const double v = curve.voltage(i * 1e-4);
        REQUIRE(v >= prev);
        prev = v;
    }
    for (const auto& k : curve.knots()) {
        CHECK(curve.voltage(k.remaining_fraction) == doctest::Approx(k.voltage).epsilon(1e-14));
    }
}

TEST_CASE("discharge curve rejects non-monotone knots")
{
    CHECK_THROWS_AS(DischargeCurve(16.8, 13.2, {{0.3, 15.0}, {0.6, 14.0}}), BatteryError);
    CHECK_THROWS_AS(DischargeCurve(13.2, 16.8, {}), BatteryError);
}

TEST_CASE("discharge_step drains charge at the modeled current")
{
    const auto curve = DischargeCurve::lipo_default(16.8, 13.2);
    const CurrentModel current;
    BatteryState b;
    const BatteryState next = discharge_step(b, 45.0, 0.02, curve, current);
    CHECK(next.consumed_c == doctest::Approx(45.0 * 0.6 * 0.02).epsilon(1e-14));
    CHECK(next.v_measured < b.v_measured);
    CHECK(next.v_measured == doctest::Approx(curve.voltage(1.0 - next.consumed_c / b.capacity_c)));
}

TEST_CASE("discharge_step raises once the pack is exhausted")
{
    const auto curve = DischargeCurve::lipo_default(16.8, 13.2);
    BatteryState b;
    b.capacity_c = 10.0;
    b.consumed_c = 9.99;
    CHECK_THROWS_AS(discharge_step(b, 50.0, 1.0, curve, CurrentModel{}), BatteryError);
}

TEST_CASE("thrust efficiency table")
{
    const auto t = ThrustEfficiencyTable::defaults();
    CHECK_NOTHROW(t.validate());
    CHECK(t.at(100.0) == 1.0);
    CHECK(t.at(120.0) == 1.0);
    CHECK(t.at(10.0) == t.efficiency.front());
    CHECK(t.at(95.0) == doctest::Approx(0.5 * (0.9568 + 1.0)));
    CHECK(ThrustEfficiencyTable::ideal().at(47.0) == 1.0);
    ThrustEfficiencyTable bad{{50, 40}, {1, 1}};
    CHECK_THROWS_AS(bad.validate(), BatteryError);
}

TEST_CASE("default efficiency makes the compensated cubic hold delivered thrust nearly constant")
{
    // The vehicle the cubic was tuned for: T(v) * eff(v) is flat to within rounding.
    const ThrustCurve c;
    const auto t = ThrustEfficiencyTable::defaults();
    for (std::size_t i = 0; i < t.v_remaining.size(); ++i) {
        const double delivered = thrust_command(t.v_remaining[i], c) * t.efficiency[i];
        CHECK(delivered == doctest::Approx(thrust_command(100.0, c)).epsilon(2e-4));
    }
}
