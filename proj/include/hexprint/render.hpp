#pragma once

#include <string>
#include <vector>

#include "hexprint/scenario.hpp"

namespace hexprint {

struct RenderStyle {
    double pixels_per_mm = 8.0;
    double margin_mm = 10.0;
    // Segments shorter than this fraction of the median moving segment count as dwell.
    double dwell_length_fraction = 0.25;
    double clump_merge_mm = 1.0;
};

struct BeadStroke {
    Vec2 start_mm;
    Vec2 end_mm;
    double width_mm = 0.0; // sqrt of the implied cross-section
};

struct BeadClump {
    Vec2 center_mm;
    double volume_mm3 = 0.0;
    double radius_mm = 0.0; // disk of bead height holding the dwell volume
};

struct BeadLayout {
    std::vector<BeadStroke> strokes;
    std::vector<BeadClump> clumps;
    double nominal_width_mm = 0.0;
};

BeadLayout layout_bead(const BeadTrace& bead, const RenderStyle& style);

/// SVG with the dashed target, bead strokes scaled by cross-section and clump disks.
std::string render_trace(const RunTrace& trace, const RenderStyle& style);

}  // namespace hexprint
