#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "hexprint/deposition.hpp"
#include "hexprint/geometry.hpp"

namespace hexprint {

class AnalysisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Deviation {
    double max = 0.0; // m
    double rms = 0.0; // m
    std::size_t samples = 0;
};

/// Nearest-point distance from each extruding segment midpoint to the target strokes.
/// Midpoints within `exclusion_radius` of any point in `exclusions` are skipped.
Deviation path_deviation(const BeadTrace& trace, const std::vector<Polyline>& target,
                         const std::vector<Vec2>& exclusions = {}, double exclusion_radius = 0.0);

/// Volume deposited on straight bead away from every corner disk, per metre of travel.
/// Returns 0 when nothing was deposited outside the disks.
double straight_bead_linear_density(const BeadTrace& trace, const std::vector<Vec2>& corners, double radius);

/// Volume inside each corner disk relative to a straight bead crossing the same disk.
/// 1 means no clump; a corner with no nearby deposit reports 0.
std::vector<double> corner_clump_ratio(const BeadTrace& trace, const std::vector<Vec2>& corners, double radius);

struct GapRange {
    double min_mm = 0.0;
    double max_mm = 0.0;
    double range_mm = 0.0;
    bool empty = true; // no extruding samples
};

GapRange gap_constancy(const BeadTrace& trace);

/// (max - min) / mean of the normal force samples, in percent.
double friction_variation(const std::vector<double>& normal_force);

/// Disconnected printed components: contiguous extruding runs are merged when they
/// come within `join_distance` of each other.
std::size_t bead_components(const BeadTrace& trace, double join_distance);

struct PrintReport {
    double max_deviation_m = 0.0;
    double rms_deviation_m = 0.0;
    std::vector<double> clump_ratio;
    double gap_range_mm = 0.0;
    double normal_force_variation_pct = 0.0;
    double mission_time_s = 0.0;
};

}  // namespace hexprint
