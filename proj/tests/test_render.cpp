#include "doctest.h"

#include "hexprint/render.hpp"

using namespace hexprint;

namespace {

std::size_t count(const std::string& s, const std::string& needle)
{
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) {
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("empty bead renders only the target and a notice")
{
    RunTrace t;
    t.target = {{{0, 0}, {0.1, 0}}};
    const std::string svg = render_trace(t, RenderStyle{});
    CHECK(count(svg, "<polyline") == 1);
    CHECK(count(svg, "no deposited material") == 1);
    CHECK(count(svg, "<line") == 0);
    CHECK(count(svg, "<circle") == 0);
}

TEST_CASE("steady bead gives uniform strokes, a dwell gives one wider clump")
{
    BeadTrace bead;
    const DepositionParams p;
    deposit_step(bead, {0.0, 0.0}, 0.5, false, 0.02, 0.0, p);
    for (int i = 1; i <= 100; ++i) {
        deposit_step(bead, {0.0004 * i, 0.0}, 0.5, true, 0.02, 0.02 * i, p);
    }
    for (int i = 0; i < 150; ++i) {
        deposit_step(bead, {0.04, 0.0}, 0.5, true, 0.02, 2.0 + 0.02 * i, p);
    }
    const BeadLayout layout = layout_bead(bead, RenderStyle{});
    REQUIRE(layout.strokes.size() >= 99);
    for (const auto& s : layout.strokes) {
        CHECK(s.width_mm == doctest::Approx(layout.nominal_width_mm).epsilon(1e-9));
    }
    REQUIRE(layout.clumps.size() == 1);
    CHECK(layout.clumps[0].volume_mm3 == doctest::Approx(150 * 0.02 * p.flow_rate_mm3ps));
    CHECK(layout.clumps[0].radius_mm > layout.nominal_width_mm);
}
