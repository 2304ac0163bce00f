#include "hexprint/deposition.hpp"

#include <cmath>
#include <stdexcept>

namespace hexprint {

void deposit_step(BeadTrace& trace, Vec2 nozzle_position, double gap_mm, bool extruding, double dt,
                  double time, const DepositionParams& params)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("deposit_step requires dt > 0");
    }
    if (!(params.flow_rate_mm3ps >= 0.0)) {
        throw std::invalid_argument("flow rate must be non-negative");
    }
    if (!nozzle_position.finite() || !std::isfinite(gap_mm)) {
        throw std::invalid_argument("non-finite nozzle position or gap");
    }
    BeadSegment seg;
    seg.start = trace.segments.empty() ? nozzle_position : trace.segments.back().end;
    seg.end = nozzle_position;
    seg.duration = dt;
    seg.timestamp = time;
    seg.extruding = extruding;
    seg.volume_mm3 = extruding ? params.flow_rate_mm3ps * dt : 0.0;
    seg.adhered = gap_mm <= params.adhesion_gap_limit_mm;
    trace.segments.push_back(seg);
    trace.nozzle_gap_series.push_back({time, gap_mm, extruding});
}

double nozzle_gap(const HexState& state, const NozzleGeometry& geometry)
{
    // The guard pivots on its rim; the center lifts by r * |tilt| for small tilts.
    const double tr = std::tan(deg2rad(state.attitude_true.roll));
    const double tp = std::tan(deg2rad(state.attitude_true.pitch));
    const double lift = geometry.guard_radius_mm * std::hypot(tr, tp);
    return geometry.design_gap_mm + lift;
}

double max_gap_increase(double limit_deg, const NozzleGeometry& geometry)
{
    return geometry.guard_radius_mm * std::tan(deg2rad(limit_deg)) * std::sqrt(2.0);
}

double total_volume(const BeadTrace& trace)
{
    double v = 0.0;
    for (const auto& s : trace.segments) {
        v += s.volume_mm3;
    }
    return v;
}

double total_extruding_time(const BeadTrace& trace)
{
    double t = 0.0;
    for (const auto& s : trace.segments) {
        if (s.extruding) {
            t += s.duration;
        }
    }
    return t;
}

}  // namespace hexprint
