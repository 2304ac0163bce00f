#include "hexprint/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hexprint {

// ---------------------------------------------------------------------------
// TOML subset
// ---------------------------------------------------------------------------

namespace {

class LineParser {
public:
    LineParser(const std::string& text, int line) : text_(text), line_(line) {}

    TomlValue value()
    {
        skip_space();
        if (at_end()) {
            fail("missing value");
        }
        const char c = text_[pos_];
        if (c == '"') {
            return {string_value()};
        }
        if (c == '[') {
            return {array_value()};
        }
        if (text_.compare(pos_, 4, "true") == 0) {
            pos_ += 4;
            return {true};
        }
        if (text_.compare(pos_, 5, "false") == 0) {
            pos_ += 5;
            return {false};
        }
        return {number_value()};
    }

    void expect_end()
    {
        skip_space();
        if (!at_end() && text_[pos_] != '#') {
            fail("unexpected trailing characters");
        }
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }

    void skip_space()
    {
        while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        std::ostringstream msg;
        msg << "config line " << line_ << ": " << what;
        throw ConfigError(msg.str());
    }

    std::string string_value()
    {
        ++pos_; // opening quote
        std::string out;
        while (!at_end() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                ++pos_;
            }
            out.push_back(text_[pos_++]);
        }
        if (at_end()) {
            fail("unterminated string");
        }
        ++pos_;
        return out;
    }

    TomlArray array_value()
    {
        ++pos_; // [
        TomlArray out;
        skip_space();
        if (!at_end() && text_[pos_] == ']') {
            ++pos_;
            return out;
        }
        for (;;) {
            out.push_back(value());
            skip_space();
            if (at_end()) {
                fail("unterminated array");
            }
            if (text_[pos_] == ',') {
                ++pos_;
                skip_space();
                if (!at_end() && text_[pos_] == ']') { // trailing comma
                    ++pos_;
                    return out;
                }
                continue;
            }
            if (text_[pos_] == ']') {
                ++pos_;
                return out;
            }
            fail("expected ',' or ']' in array");
        }
    }

    double number_value()
    {
        std::size_t end = pos_;
        while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '-'
                                      || text_[end] == '+' || text_[end] == '.' || text_[end] == 'e'
                                      || text_[end] == 'E' || text_[end] == '_')) {
            ++end;
        }
        std::string token = text_.substr(pos_, end - pos_);
        std::erase(token, '_');
        if (!token.empty() && token.front() == '+') {
            token.erase(0, 1);
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
            fail("invalid value '" + text_.substr(pos_) + "'");
        }
        pos_ = end;
        return v;
    }

    const std::string& text_;
    int line_;
    std::size_t pos_ = 0;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

TomlDocument parse_toml(const std::string& text)
{
    TomlDocument doc;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.front() == '[') {
            const auto close = line.find(']');
            if (close == std::string::npos) {
                throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section header");
            }
            section = trim(line.substr(1, close - 1));
            doc[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string rest = line.substr(eq + 1);
        LineParser parser(rest, line_no);
        TomlValue v = parser.value();
        parser.expect_end();
        if (doc[section].count(key) != 0) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        doc[section][key] = std::move(v);
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Scenario binding
// ---------------------------------------------------------------------------

namespace {

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, ptr);
    if (s.find_first_of(".eE") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    return out + "\"";
}

// Reads fields out of a parsed document, tracking which keys were used.
class Reader {
public:
    explicit Reader(const TomlDocument& doc) : doc_(doc) {}

    void section(const std::string& name)
    {
        section_ = name;
        sections_.insert(name);
    }

    void num(const std::string& key, double& out)
    {
        if (const TomlValue* v = find(key)) {
            out = as_number(*v, key);
        }
    }
    void boolean(const std::string& key, bool& out)
    {
        if (const TomlValue* v = find(key)) {
            if (!v->is_bool()) wrong(key, "a boolean");
            out = std::get<bool>(v->data);
        }
    }
    void text(const std::string& key, std::string& out)
    {
        if (const TomlValue* v = find(key)) {
            if (!v->is_string()) wrong(key, "a string");
            out = std::get<std::string>(v->data);
        }
    }
    void integer(const std::string& key, std::uint64_t& out)
    {
        if (const TomlValue* v = find(key)) {
            const double d = as_number(*v, key);
            if (d < 0.0 || d > 9007199254740992.0 || std::floor(d) != d) wrong(key, "a non-negative integer");
            out = static_cast<std::uint64_t>(d);
        }
    }
    void vec2(const std::string& key, Vec2& out)
    {
        if (const TomlValue* v = find(key)) {
            const auto xs = numbers(*v, key);
            if (xs.size() != 2) wrong(key, "a 2-element array");
            out = {xs[0], xs[1]};
        }
    }
    void gains(const std::string& key, AxisGains& out)
    {
        if (const TomlValue* v = find(key)) {
            const auto xs = numbers(*v, key);
            if (xs.size() != 3) wrong(key, "[kp, ki, kd]");
            out = {xs[0], xs[1], xs[2]};
        }
    }
    void pairs(const std::string& key, std::vector<Vec2>& out)
    {
        if (const TomlValue* v = find(key)) {
            if (!v->is_array()) wrong(key, "an array of pairs");
            out.clear();
            for (const auto& item : std::get<TomlArray>(v->data)) {
                const auto xs = numbers(item, key);
                if (xs.size() != 2) wrong(key, "an array of pairs");
                out.push_back({xs[0], xs[1]});
            }
        }
    }
    void bools(const std::string& key, std::vector<bool>& out, bool& present)
    {
        present = false;
        if (const TomlValue* v = find(key)) {
            if (!v->is_array()) wrong(key, "an array of booleans");
            out.clear();
            for (const auto& item : std::get<TomlArray>(v->data)) {
                if (!item.is_bool()) wrong(key, "an array of booleans");
                out.push_back(std::get<bool>(item.data));
            }
            present = true;
        }
    }
    bool has(const std::string& key) const
    {
        const auto s = doc_.find(section_);
        return s != doc_.end() && s->second.count(key) != 0;
    }

    void reject_unknown() const
    {
        for (const auto& [sec, keys] : doc_) {
            if (!sec.empty() && sections_.count(sec) == 0) {
                throw ConfigError("unknown config section [" + sec + "]");
            }
            for (const auto& [key, value] : keys) {
                if (used_.count(sec + "." + key) == 0) {
                    throw ConfigError("unknown config key '" + (sec.empty() ? key : sec + "." + key) + "'");
                }
            }
        }
    }

private:
    const TomlValue* find(const std::string& key)
    {
        used_.insert(section_ + "." + key);
        const auto s = doc_.find(section_);
        if (s == doc_.end()) {
            return nullptr;
        }
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    [[noreturn]] void wrong(const std::string& key, const std::string& expected) const
    {
        throw ConfigError("config key '" + section_ + "." + key + "' must be " + expected);
    }

    double as_number(const TomlValue& v, const std::string& key) const
    {
        if (!v.is_number()) wrong(key, "a number");
        return std::get<double>(v.data);
    }

    std::vector<double> numbers(const TomlValue& v, const std::string& key) const
    {
        if (!v.is_array()) wrong(key, "an array of numbers");
        std::vector<double> out;
        for (const auto& item : std::get<TomlArray>(v.data)) {
            out.push_back(as_number(item, key));
        }
        return out;
    }

    const TomlDocument& doc_;
    std::string section_;
    std::set<std::string> used_;
    std::set<std::string> sections_;
};

class Writer {
public:
    void section(const std::string& name)
    {
        if (!out_.str().empty()) {
            out_ << '\n';
        }
        out_ << '[' << name << "]\n";
    }
    void num(const std::string& key, double v) { out_ << key << " = " << format_number(v) << '\n'; }
    void boolean(const std::string& key, bool v) { out_ << key << " = " << (v ? "true" : "false") << '\n'; }
    void text(const std::string& key, const std::string& v) { out_ << key << " = " << quote(v) << '\n'; }
    void integer(const std::string& key, std::uint64_t v) { out_ << key << " = " << v << '\n'; }
    void vec2(const std::string& key, Vec2 v)
    {
        out_ << key << " = [" << format_number(v.x) << ", " << format_number(v.y) << "]\n";
    }
    void gains(const std::string& key, const AxisGains& g)
    {
        out_ << key << " = [" << format_number(g.kp) << ", " << format_number(g.ki) << ", " << format_number(g.kd)
             << "]\n";
    }
    void pairs(const std::string& key, const std::vector<Vec2>& v)
    {
        out_ << key << " = [";
        for (std::size_t i = 0; i < v.size(); ++i) {
            out_ << (i ? ", " : "") << '[' << format_number(v[i].x) << ", " << format_number(v[i].y) << ']';
        }
        out_ << "]\n";
    }
    void bools(const std::string& key, const std::vector<bool>& v)
    {
        out_ << key << " = [";
        for (std::size_t i = 0; i < v.size(); ++i) {
            out_ << (i ? ", " : "") << (v[i] ? "true" : "false");
        }
        out_ << "]\n";
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

// Fields shared by the reader and the writer, in canonical order.
template <typename Io, typename S>
void bind_common(Io& io, S& s)
{
    io.section("scenario");
    io.text("name", s.name);
    io.integer("seed", s.seed);
    io.num("max_duration_s", s.max_duration_s);
    io.text("output_dir", s.output_dir);

    io.section("world");
    auto& w = s.world;
    io.num("mass_kg", w.mass_kg);
    io.num("gravity_mps2", w.gravity_mps2);
    io.num("surface_height_m", w.surface_height_m);
    io.num("mu_static", w.mu_static);
    io.num("mu_kinetic", w.mu_kinetic);
    io.num("attitude_time_constant_s", w.attitude_time_constant_s);
    io.num("estimation_offset_roll_deg", w.estimation_offset_deg.roll);
    io.num("estimation_offset_pitch_deg", w.estimation_offset_deg.pitch);
    io.num("ground_effect_amplitude_n", w.ground_effect_amplitude_n);
    io.num("ground_effect_correlation_time_s", w.ground_effect_correlation_time_s);
    io.num("ground_effect_height_m", w.ground_effect_height_m);
    io.num("ground_effect_update_dt_s", w.ground_effect_update_dt_s);
    io.vec2("com_offset_m", w.com_offset_m);
    io.num("com_moment_arm_m", w.com_moment_arm_m);
    io.num("hover_percent", w.hover_percent);
    io.num("physics_dt_s", w.physics_dt_s);
    io.num("penetration_tolerance_m", w.penetration_tolerance_m);
    io.num("stick_speed_mps", w.stick_speed_mps);

    io.section("controller");
    auto& c = s.controller;
    io.gains("pitch_gains", c.pitch);
    io.gains("roll_gains", c.roll);
    io.num("alpha_lim_deg", c.alpha_lim_deg);
    io.num("beta_theta_deg", c.beta_theta_deg);
    io.num("beta_phi_deg", c.beta_phi_deg);
    io.num("control_dt_s", c.control_dt_s);
    io.num("sliding_speed_mps", c.sliding_speed_mps);
    io.num("corner_tolerance_m", c.corner_tolerance_m);
    io.boolean("anti_windup", c.anti_windup);

    io.section("battery");
    auto& p = s.power;
    io.num("v_max_v", p.battery.v_max);
    io.num("v_min_v", p.battery.v_min);
    io.num("capacity_c", p.battery.capacity_c);
    io.num("consumed_c", p.battery.consumed_c);
    io.num("amps_per_percent", p.current.amps_per_percent);

    io.section("thrust");
    io.num("cubic_a", p.curve.a);
    io.num("cubic_b", p.curve.b);
    io.num("cubic_c", p.curve.c);
    io.boolean("compensation", p.compensation);

    io.section("deposition");
    io.num("flow_rate_mm3ps", s.deposition.flow_rate_mm3ps);
    io.num("adhesion_gap_limit_mm", s.deposition.adhesion_gap_limit_mm);
    io.num("design_gap_mm", s.nozzle.design_gap_mm);
    io.num("guard_radius_mm", s.nozzle.guard_radius_mm);

    io.section("mission");
    auto& m = s.mission;
    io.num("start_height_m", m.start_height_m);
    io.num("descent_rate_mps", m.descent_rate_mps);
    io.num("corner_dwell_s", m.corner_dwell_s);
    io.boolean("extrude_during_dwell", m.extrude_during_dwell);
    io.num("contact_grace_s", m.contact_grace_s);
    io.boolean("repeat_path", m.repeat_path);
    io.num("stop_at_v_remaining_pct", m.stop_at_v_remaining_pct);
    io.num("measurement_noise_m", m.measurement_noise_m);

    io.section("analysis");
    io.num("corner_radius_m", s.analysis.corner_radius_m);
    io.num("start_exclusion_m", s.analysis.start_exclusion_m);
}

std::vector<Vec2> knots_as_pairs(const std::vector<DischargeKnot>& knots)
{
    std::vector<Vec2> out;
    for (const auto& k : knots) {
        out.push_back({k.remaining_fraction, k.voltage});
    }
    return out;
}

std::vector<Vec2> table_as_pairs(const ThrustEfficiencyTable& t)
{
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < t.v_remaining.size(); ++i) {
        out.push_back({t.v_remaining[i], t.efficiency[i]});
    }
    return out;
}

}  // namespace

Scenario scenario_from_toml(const std::string& text)
{
    const TomlDocument doc = parse_toml(text);
    Scenario s;
    Reader r(doc);
    bind_common(r, s);

    r.section("discharge_curve");
    if (r.has("knots")) {
        std::vector<Vec2> knots;
        r.pairs("knots", knots);
        s.power.discharge_knots.clear();
        for (Vec2 k : knots) {
            s.power.discharge_knots.push_back({k.x, k.y});
        }
    } else {
        s.power.discharge_knots = DischargeCurve::lipo_default(s.power.battery.v_max, s.power.battery.v_min)
                                      .interior_knots();
    }
    s.power.battery.v_measured = s.power.battery.v_max;

    r.section("thrust_efficiency");
    if (r.has("table")) {
        std::vector<Vec2> rows;
        r.pairs("table", rows);
        s.power.efficiency.v_remaining.clear();
        s.power.efficiency.efficiency.clear();
        for (Vec2 row : rows) {
            s.power.efficiency.v_remaining.push_back(row.x);
            s.power.efficiency.efficiency.push_back(row.y);
        }
    }

    r.section("path");
    std::string path_name;
    r.text("name", path_name);
    std::vector<Vec2> points;
    r.pairs("waypoints_m", points);
    std::vector<bool> extrude;
    bool have_extrude = false;
    r.bools("extrude", extrude, have_extrude);
    if (r.has("waypoints_m")) {
        if (have_extrude && extrude.size() != points.size()) {
            throw ConfigError("path.extrude must have one entry per waypoint");
        }
        s.path.name = path_name.empty() ? "custom" : path_name;
        s.path.waypoints.clear();
        for (std::size_t i = 0; i < points.size(); ++i) {
            s.path.waypoints.push_back({points[i], have_extrude ? static_cast<bool>(extrude[i]) : true});
        }
    } else if (!path_name.empty()) {
        s.path = builtin_path(path_name);
    }

    r.reject_unknown();
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return scenario_from_toml(text.str());
}

std::string scenario_to_toml(const Scenario& scenario)
{
    Writer w;
    bind_common(w, scenario);
    w.section("discharge_curve");
    w.pairs("knots", knots_as_pairs(scenario.power.discharge_knots));
    w.section("thrust_efficiency");
    w.pairs("table", table_as_pairs(scenario.power.efficiency));
    w.section("path");
    w.text("name", scenario.path.name);
    std::vector<Vec2> points;
    std::vector<bool> extrude;
    for (const auto& wp : scenario.path.waypoints) {
        points.push_back(wp.position);
        extrude.push_back(wp.extrude);
    }
    w.pairs("waypoints_m", points);
    w.bools("extrude", extrude);
    return w.str();
}

}  // namespace hexprint
