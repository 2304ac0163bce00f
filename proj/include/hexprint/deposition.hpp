#pragma once

#include <vector>

#include "hexprint/geometry.hpp"
#include "hexprint/world.hpp"

namespace hexprint {

struct BeadSegment {
    Vec2 start;              // m
    Vec2 end;                // m
    double volume_mm3 = 0.0;
    double timestamp = 0.0;  // s, end of the deposition interval
    double duration = 0.0;   // s
    bool extruding = false;
    bool adhered = true;     // false when deposited from above the adhesion gap
};

struct GapSample {
    double time = 0.0;
    double gap_mm = 0.0;
    bool extruding = false;
};

struct BeadTrace {
    std::vector<BeadSegment> segments;
    std::vector<GapSample> nozzle_gap_series;
};

struct DepositionParams {
    double flow_rate_mm3ps = 2.0;
    double adhesion_gap_limit_mm = 1.0;
};

struct NozzleGeometry {
    double design_gap_mm = 0.5;    // nozzle tip to surface with the guard flat
    double guard_radius_mm = 5.0;  // rim radius the guard pivots on when tilted
};

/// Appends one segment from the previous nozzle position to `nozzle_position`
/// (ground projection) and records the gap sample.
void deposit_step(BeadTrace& trace, Vec2 nozzle_position, double gap_mm, bool extruding, double dt,
                  double time, const DepositionParams& params);

/// Nozzle-to-surface gap with the guard resting on the surface at the state's true attitude.
double nozzle_gap(const HexState& state, const NozzleGeometry& geometry);

/// Largest gap increase reachable at |roll|, |pitch| <= limit_deg.
double max_gap_increase(double limit_deg, const NozzleGeometry& geometry);

double total_volume(const BeadTrace& trace);
double total_extruding_time(const BeadTrace& trace);

}  // namespace hexprint
