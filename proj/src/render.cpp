#include "hexprint/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hexprint {

namespace {

Vec2 to_mm(Vec2 m) { return m * 1000.0; }

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

BeadLayout layout_bead(const BeadTrace& bead, const RenderStyle& style)
{
    BeadLayout layout;
    std::vector<double> moving;
    for (const auto& s : bead.segments) {
        const double len = (to_mm(s.end) - to_mm(s.start)).norm();
        if (s.extruding && len > 0.0) {
            moving.push_back(len);
        }
    }
    double median = 0.0;
    if (!moving.empty()) {
        std::nth_element(moving.begin(), moving.begin() + static_cast<std::ptrdiff_t>(moving.size() / 2), moving.end());
        median = moving[moving.size() / 2];
    }
    const double dwell_len = style.dwell_length_fraction * median;

    double stroke_volume = 0.0;
    double stroke_length = 0.0;
    for (const auto& s : bead.segments) {
        if (!s.extruding || s.volume_mm3 <= 0.0) {
            continue;
        }
        const Vec2 a = to_mm(s.start);
        const Vec2 b = to_mm(s.end);
        const double len = (b - a).norm();
        if (len > dwell_len && len > 0.0) {
            layout.strokes.push_back({a, b, std::sqrt(s.volume_mm3 / len)});
            stroke_volume += s.volume_mm3;
            stroke_length += len;
            continue;
        }
        if (!layout.clumps.empty() && (layout.clumps.back().center_mm - b).norm() <= style.clump_merge_mm) {
            auto& c = layout.clumps.back();
            const double w = c.volume_mm3 + s.volume_mm3;
            c.center_mm = (c.center_mm * c.volume_mm3 + b * s.volume_mm3) * (1.0 / w);
            c.volume_mm3 = w;
        } else {
            layout.clumps.push_back({b, s.volume_mm3, 0.0});
        }
    }
    layout.nominal_width_mm = stroke_length > 0.0 ? std::sqrt(stroke_volume / stroke_length) : 0.0;
    const double height = layout.nominal_width_mm > 0.0 ? layout.nominal_width_mm : 1.0;
    for (auto& c : layout.clumps) {
        c.radius_mm = std::sqrt(c.volume_mm3 / (kPi * height));
    }
    return layout;
}

std::string render_trace(const RunTrace& trace, const RenderStyle& style)
{
    const BeadLayout layout = layout_bead(trace.bead, style);

    double min_x = INFINITY, min_y = INFINITY, max_x = -INFINITY, max_y = -INFINITY;
    auto grow = [&](Vec2 p, double r) {
        min_x = std::min(min_x, p.x - r);
        min_y = std::min(min_y, p.y - r);
        max_x = std::max(max_x, p.x + r);
        max_y = std::max(max_y, p.y + r);
    };
    for (const auto& stroke : trace.target) {
        for (Vec2 p : stroke) {
            grow(to_mm(p), 0.0);
        }
    }
    for (const auto& s : layout.strokes) {
        grow(s.start_mm, s.width_mm);
        grow(s.end_mm, s.width_mm);
    }
    for (const auto& c : layout.clumps) {
        grow(c.center_mm, c.radius_mm);
    }
    if (!std::isfinite(min_x)) {
        min_x = min_y = 0.0;
        max_x = max_y = 10.0;
    }

    const double k = style.pixels_per_mm;
    const double m = style.margin_mm;
    const double width = (max_x - min_x + 2 * m) * k;
    const double height = (max_y - min_y + 2 * m) * k;
    auto px = [&](Vec2 p) { return fmt((p.x - min_x + m) * k) + "," + fmt((max_y - p.y + m) * k); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height)
           + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#1f4e8c\"/>\n";

    svg += "<g id=\"target\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"1\" stroke-dasharray=\"6,4\">\n";
    for (const auto& stroke : trace.target) {
        svg += "<polyline points=\"";
        for (std::size_t i = 0; i < stroke.size(); ++i) {
            svg += (i ? " " : "") + px(to_mm(stroke[i]));
        }
        svg += "\"/>\n";
    }
    svg += "</g>\n";

    if (layout.strokes.empty() && layout.clumps.empty()) {
        svg += "<g id=\"notice\"><text x=\"" + fmt(m * k) + "\" y=\"" + fmt(m * k * 0.6)
               + "\" fill=\"#ffffff\" font-family=\"sans-serif\" font-size=\"14\">no deposited material</text></g>\n";
    } else {
        svg += "<g id=\"bead\" stroke=\"#f2f2f2\" stroke-linecap=\"round\">\n";
        for (const auto& s : layout.strokes) {
            const auto a = px(s.start_mm);
            const auto b = px(s.end_mm);
            svg += "<line x1=\"" + a.substr(0, a.find(',')) + "\" y1=\"" + a.substr(a.find(',') + 1) + "\" x2=\""
                   + b.substr(0, b.find(',')) + "\" y2=\"" + b.substr(b.find(',') + 1) + "\" stroke-width=\""
                   + fmt(s.width_mm * k) + "\"/>\n";
        }
        svg += "</g>\n<g id=\"clumps\" fill=\"#f2f2f2\" fill-opacity=\"0.85\">\n";
        for (const auto& c : layout.clumps) {
            const auto p = px(c.center_mm);
            svg += "<circle cx=\"" + p.substr(0, p.find(',')) + "\" cy=\"" + p.substr(p.find(',') + 1) + "\" r=\""
                   + fmt(c.radius_mm * k) + "\"/>\n";
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace hexprint
