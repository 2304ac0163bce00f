#include "hexprint/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hexprint {

Deviation path_deviation(const BeadTrace& trace, const std::vector<Polyline>& target,
                         const std::vector<Vec2>& exclusions, double exclusion_radius)
{
    if (trace.segments.empty()) {
        throw AnalysisError("path_deviation: empty bead trace");
    }
    if (target.empty() || std::all_of(target.begin(), target.end(), [](const Polyline& p) { return p.empty(); })) {
        throw AnalysisError("path_deviation: empty target path");
    }
    Deviation out;
    double sum_sq = 0.0;
    for (const auto& seg : trace.segments) {
        if (!seg.extruding) {
            continue;
        }
        const Vec2 mid = (seg.start + seg.end) * 0.5;
        const bool skipped = std::any_of(exclusions.begin(), exclusions.end(),
                                         [&](Vec2 e) { return (mid - e).norm() < exclusion_radius; });
        if (skipped) {
            continue;
        }
        double d = INFINITY;
        for (const auto& stroke : target) {
            d = std::min(d, distance_to_polyline(mid, stroke));
        }
        out.max = std::max(out.max, d);
        sum_sq += d * d;
        ++out.samples;
    }
    if (out.samples == 0) {
        throw AnalysisError("path_deviation: no deposited segments outside the excluded zones");
    }
    out.rms = std::sqrt(sum_sq / static_cast<double>(out.samples));
    return out;
}

namespace {

// Volume of one segment falling inside a disk, split by the length fraction inside.
double volume_in_disk(const BeadSegment& seg, Vec2 center, double radius)
{
    const double len = (seg.end - seg.start).norm();
    if (len <= 0.0) {
        return (seg.end - center).norm() <= radius ? seg.volume_mm3 : 0.0;
    }
    return seg.volume_mm3 * segment_length_in_disk(seg.start, seg.end, center, radius) / len;
}

}  // namespace

double straight_bead_linear_density(const BeadTrace& trace, const std::vector<Vec2>& corners, double radius)
{
    double volume = 0.0;
    double length = 0.0;
    for (const auto& seg : trace.segments) {
        if (!seg.extruding) {
            continue;
        }
        const bool touches_corner = std::any_of(corners.begin(), corners.end(), [&](Vec2 c) {
            return distance_to_segment(c, seg.start, seg.end) <= radius;
        });
        if (touches_corner) {
            continue;
        }
        volume += seg.volume_mm3;
        length += (seg.end - seg.start).norm();
    }
    return length > 0.0 ? volume / length : 0.0;
}

std::vector<double> corner_clump_ratio(const BeadTrace& trace, const std::vector<Vec2>& corners, double radius)
{
    if (!(radius > 0.0)) {
        throw AnalysisError("corner_clump_ratio: radius must be positive");
    }
    const double density = straight_bead_linear_density(trace, corners, radius);
    std::vector<double> ratios;
    ratios.reserve(corners.size());
    for (const Vec2 c : corners) {
        double inside = 0.0;
        for (const auto& seg : trace.segments) {
            if (seg.extruding) {
                inside += volume_in_disk(seg, c, radius);
            }
        }
        // A straight bead crosses the disk along a diameter: 2r of travel.
        ratios.push_back(inside > 0.0 && density > 0.0 ? inside / (2.0 * radius * density) : 0.0);
    }
    return ratios;
}

GapRange gap_constancy(const BeadTrace& trace)
{
    GapRange out;
    for (const auto& g : trace.nozzle_gap_series) {
        if (!g.extruding) {
            continue;
        }
        if (out.empty) {
            out.min_mm = out.max_mm = g.gap_mm;
            out.empty = false;
        } else {
            out.min_mm = std::min(out.min_mm, g.gap_mm);
            out.max_mm = std::max(out.max_mm, g.gap_mm);
        }
    }
    out.range_mm = out.max_mm - out.min_mm;
    return out;
}

double friction_variation(const std::vector<double>& normal_force)
{
    if (normal_force.empty()) {
        throw AnalysisError("friction_variation: no contact samples");
    }
    const auto [lo, hi] = std::minmax_element(normal_force.begin(), normal_force.end());
    const double mean = std::accumulate(normal_force.begin(), normal_force.end(), 0.0)
                        / static_cast<double>(normal_force.size());
    if (!(mean > 0.0)) {
        throw AnalysisError("friction_variation: zero mean normal force (no contact)");
    }
    return 100.0 * (*hi - *lo) / mean;
}

std::size_t bead_components(const BeadTrace& trace, double join_distance)
{
    // Contiguous extruding runs.
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < trace.segments.size();) {
        if (!trace.segments[i].extruding) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < trace.segments.size() && trace.segments[j].extruding) {
            ++j;
        }
        runs.emplace_back(i, j);
        i = j;
    }

    std::vector<std::size_t> parent(runs.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };

    auto runs_touch = [&](std::pair<std::size_t, std::size_t> a, std::pair<std::size_t, std::size_t> b) {
        for (std::size_t i = a.first; i < a.second; ++i) {
            const Vec2 p = trace.segments[i].end;
            for (std::size_t j = b.first; j < b.second; ++j) {
                if (distance_to_segment(p, trace.segments[j].start, trace.segments[j].end) < join_distance) {
                    return true;
                }
            }
        }
        return false;
    };

    for (std::size_t a = 0; a < runs.size(); ++a) {
        for (std::size_t b = a + 1; b < runs.size(); ++b) {
            if (find(a) != find(b) && (runs_touch(runs[a], runs[b]) || runs_touch(runs[b], runs[a]))) {
                parent[find(a)] = find(b);
            }
        }
    }
    std::size_t count = 0;
    for (std::size_t a = 0; a < runs.size(); ++a) {
        if (find(a) == a) {
            ++count;
        }
    }
    return count;
}

}  // namespace hexprint
