#include "hexprint/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hexprint/render.hpp"

namespace hexprint {

using nlohmann::json;

const char* const kTraceCsvHeader =
    "time_s,phase,x_m,y_m,z_m,setpoint_x_m,setpoint_y_m,roll_cmd_deg,pitch_cmd_deg,thrust_cmd_pct,"
    "normal_force_n,voltage_v,v_remaining_pct,in_contact,extruding";

namespace {

void put(std::string& out, double v)
{
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

double take(const std::string& field, std::size_t line)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw std::runtime_error("trace.csv line " + std::to_string(line) + ": bad number '" + field + "'");
    }
    return v;
}

json vec(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 vec(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json points(const std::vector<Vec2>& pts)
{
    json a = json::array();
    for (Vec2 p : pts) {
        a.push_back(vec(p));
    }
    return a;
}

std::vector<Vec2> points(const json& j)
{
    std::vector<Vec2> out;
    for (const auto& p : j) {
        out.push_back(vec(p));
    }
    return out;
}

}  // namespace

std::string trace_csv(const std::vector<RunRecord>& records)
{
    std::string out = kTraceCsvHeader;
    out.push_back('\n');
    for (const auto& r : records) {
        put(out, r.time);
        out += r.phase == Phase::Print ? ",print," : ",descent,";
        for (double v : {r.position.x, r.position.y, r.position.z, r.setpoint.x, r.setpoint.y, r.roll_cmd_deg,
                         r.pitch_cmd_deg, r.thrust_cmd_pct, r.normal_force_n, r.voltage_v, r.v_remaining_pct}) {
            put(out, v);
            out.push_back(',');
        }
        out += r.in_contact ? "1," : "0,";
        out += r.extruding ? "1\n" : "0\n";
    }
    return out;
}

std::vector<RunRecord> parse_trace_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kTraceCsvHeader) {
        throw std::runtime_error("trace.csv: unexpected header");
    }
    std::vector<RunRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 15) {
            throw std::runtime_error("trace.csv line " + std::to_string(line_no) + ": expected 15 columns");
        }
        RunRecord r;
        r.time = take(f[0], line_no);
        if (f[1] == "print") {
            r.phase = Phase::Print;
        } else if (f[1] == "descent") {
            r.phase = Phase::Descent;
        } else {
            throw std::runtime_error("trace.csv line " + std::to_string(line_no) + ": unknown phase");
        }
        r.position = {take(f[2], line_no), take(f[3], line_no), take(f[4], line_no)};
        r.setpoint = {take(f[5], line_no), take(f[6], line_no)};
        r.roll_cmd_deg = take(f[7], line_no);
        r.pitch_cmd_deg = take(f[8], line_no);
        r.thrust_cmd_pct = take(f[9], line_no);
        r.normal_force_n = take(f[10], line_no);
        r.voltage_v = take(f[11], line_no);
        r.v_remaining_pct = take(f[12], line_no);
        r.in_contact = f[13] == "1";
        r.extruding = f[14] == "1";
        records.push_back(r);
    }
    return records;
}

json bead_json(const RunTrace& trace)
{
    json j;
    j["status"] = to_string(trace.status);
    j["diagnostic"] = trace.diagnostic;
    j["handoffs"] = trace.handoffs;
    j["handoff_time_s"] = trace.handoff_time;
    j["end_time_s"] = trace.end_time;
    j["flow_rate_mm3ps"] = trace.flow_rate_mm3ps;
    j["thrust_extrapolated"] = trace.thrust_extrapolated;
    j["analysis"] = {{"corner_radius_m", trace.analysis.corner_radius_m},
                     {"start_exclusion_m", trace.analysis.start_exclusion_m}};
    json target = json::array();
    for (const auto& stroke : trace.target) {
        target.push_back(points(stroke));
    }
    j["target"] = target;
    j["corners"] = points(trace.corners);
    j["stroke_starts"] = points(trace.stroke_starts);

    json segs = json::array();
    for (const auto& s : trace.bead.segments) {
        segs.push_back({{"start", vec(s.start)},
                        {"end", vec(s.end)},
                        {"volume_mm3", s.volume_mm3},
                        {"timestamp_s", s.timestamp},
                        {"duration_s", s.duration},
                        {"extruding", s.extruding},
                        {"adhered", s.adhered}});
    }
    j["segments"] = segs;
    json gaps = json::array();
    for (const auto& g : trace.bead.nozzle_gap_series) {
        gaps.push_back({{"time_s", g.time}, {"gap_mm", g.gap_mm}, {"extruding", g.extruding}});
    }
    j["nozzle_gap"] = gaps;
    return j;
}

RunTrace run_from_json(const json& j, std::vector<RunRecord> records)
{
    RunTrace t;
    t.records = std::move(records);
    t.status = run_status_from_string(j.at("status").get<std::string>());
    t.diagnostic = j.at("diagnostic").get<std::string>();
    t.handoffs = j.at("handoffs").get<int>();
    t.handoff_time = j.at("handoff_time_s").get<double>();
    t.end_time = j.at("end_time_s").get<double>();
    t.flow_rate_mm3ps = j.at("flow_rate_mm3ps").get<double>();
    t.thrust_extrapolated = j.at("thrust_extrapolated").get<bool>();
    t.analysis.corner_radius_m = j.at("analysis").at("corner_radius_m").get<double>();
    t.analysis.start_exclusion_m = j.at("analysis").at("start_exclusion_m").get<double>();
    for (const auto& stroke : j.at("target")) {
        t.target.push_back(points(stroke));
    }
    t.corners = points(j.at("corners"));
    t.stroke_starts = points(j.at("stroke_starts"));
    for (const auto& s : j.at("segments")) {
        BeadSegment seg;
        seg.start = vec(s.at("start"));
        seg.end = vec(s.at("end"));
        seg.volume_mm3 = s.at("volume_mm3").get<double>();
        seg.timestamp = s.at("timestamp_s").get<double>();
        seg.duration = s.at("duration_s").get<double>();
        seg.extruding = s.at("extruding").get<bool>();
        seg.adhered = s.at("adhered").get<bool>();
        t.bead.segments.push_back(seg);
    }
    for (const auto& g : j.at("nozzle_gap")) {
        t.bead.nozzle_gap_series.push_back(
            {g.at("time_s").get<double>(), g.at("gap_mm").get<double>(), g.at("extruding").get<bool>()});
    }
    return t;
}

json report_json(const PrintReport& r)
{
    return {{"max_deviation_m", r.max_deviation_m},
            {"rms_deviation_m", r.rms_deviation_m},
            {"clump_ratio", r.clump_ratio},
            {"gap_range_mm", r.gap_range_mm},
            {"normal_force_variation_pct", r.normal_force_variation_pct},
            {"mission_time_s", r.mission_time_s}};
}

PrintReport report_from_json(const json& j)
{
    PrintReport r;
    r.max_deviation_m = j.at("max_deviation_m").get<double>();
    r.rms_deviation_m = j.at("rms_deviation_m").get<double>();
    r.clump_ratio = j.at("clump_ratio").get<std::vector<double>>();
    r.gap_range_mm = j.at("gap_range_mm").get<double>();
    r.normal_force_variation_pct = j.at("normal_force_variation_pct").get<double>();
    r.mission_time_s = j.at("mission_time_s").get<double>();
    return r;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << text;
}

void write_run_outputs(const RunTrace& trace, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_text_file(dir / "trace.csv", trace_csv(trace.records));
    write_text_file(dir / "bead.json", bead_json(trace).dump(1) + "\n");
    std::filesystem::remove(dir / "report.json");
    if (!trace.bead.segments.empty()) {
        try {
            write_text_file(dir / "report.json", report_json(compute_report(trace)).dump(2) + "\n");
        } catch (const AnalysisError&) {
            // A run without usable print data has no report.
        }
    }
    write_text_file(dir / "render.svg", render_trace(trace, RenderStyle{}));
}

RunTrace load_run(const std::filesystem::path& dir)
{
    auto records = parse_trace_csv(read_text_file(dir / "trace.csv"));
    const json bead = json::parse(read_text_file(dir / "bead.json"));
    return run_from_json(bead, std::move(records));
}

}  // namespace hexprint
