#include "doctest.h"

#include <cmath>
#include <random>

#include "hexprint/deposition.hpp"

using namespace hexprint;

TEST_CASE("volume equals flow rate times extruding time")
{
    BeadTrace trace;
    DepositionParams p;
    p.flow_rate_mm3ps = 1.7;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> step(-1e-3, 1e-3);
    std::bernoulli_distribution on(0.7);
    Vec2 pos;
    for (int i = 0; i < 5000; ++i) {
        pos = pos + Vec2{step(rng), step(rng)};
        deposit_step(trace, pos, 0.5, on(rng), 0.02, 0.02 * (i + 1), p);
    }
    const double expected = p.flow_rate_mm3ps * total_extruding_time(trace);
    CHECK(std::abs(total_volume(trace) - expected) <= 1e-9 * expected);
}

TEST_CASE("stationary extrusion deposits a zero-length segment carrying volume")
{
    BeadTrace trace;
    const DepositionParams p;
    deposit_step(trace, {0.1, 0.1}, 0.5, true, 0.02, 0.02, p);
    deposit_step(trace, {0.1, 0.1}, 0.5, true, 0.02, 0.04, p);
    REQUIRE(trace.segments.size() == 2);
    CHECK(trace.segments[1].start == trace.segments[1].end);
    CHECK(trace.segments[1].volume_mm3 == doctest::Approx(p.flow_rate_mm3ps * 0.02));
}

TEST_CASE("travel segments carry no volume and gap above the limit marks non-adhered")
{
    BeadTrace trace;
    const DepositionParams p;
    deposit_step(trace, {0, 0}, 0.5, false, 0.02, 0.02, p);
    deposit_step(trace, {0.001, 0}, 1.5, true, 0.02, 0.04, p);
    CHECK(trace.segments[0].volume_mm3 == 0.0);
    CHECK(trace.segments[0].adhered);
    CHECK_FALSE(trace.segments[1].adhered);
    CHECK(trace.nozzle_gap_series.size() == 2);
    CHECK(trace.nozzle_gap_series[1].gap_mm == 1.5);
}

TEST_CASE("deposit_step rejects bad input")
{
    BeadTrace trace;
    const DepositionParams p;
    CHECK_THROWS(deposit_step(trace, {0, 0}, 0.5, true, 0.0, 0.0, p));
    CHECK_THROWS(deposit_step(trace, {NAN, 0}, 0.5, true, 0.02, 0.0, p));
}

TEST_CASE("nozzle gap is the design gap when level and bounded under the tilt limit")
{
    const NozzleGeometry g;
    HexState s;
    CHECK(nozzle_gap(s, g) == g.design_gap_mm);
    const double bound = max_gap_increase(5.0, g);
    double worst = 0.0;
    for (int i = -50; i <= 50; ++i) {
        for (int j = -50; j <= 50; ++j) {
            s.attitude_true.roll = 0.1 * i;
            s.attitude_true.pitch = 0.1 * j;
            const double gap = nozzle_gap(s, g);
            REQUIRE(gap >= g.design_gap_mm);
            REQUIRE(gap - g.design_gap_mm <= bound + 1e-12);
            worst = std::max(worst, gap - g.design_gap_mm);
        }
    }
    // The bound is attained at the corner of the tilt box.
    CHECK(worst == doctest::Approx(bound).epsilon(1e-12));
}
