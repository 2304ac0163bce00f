#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hexprint/scenario.hpp"

namespace hexprint {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Minimal TOML subset: [section] headers, `key = value` lines, `#` comments.
// Values are numbers, booleans, double-quoted strings, or (nested) arrays on one line.
struct TomlValue;
using TomlArray = std::vector<TomlValue>;

struct TomlValue {
    std::variant<double, bool, std::string, TomlArray> data;

    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<TomlArray>(data); }
};

using TomlSection = std::map<std::string, TomlValue>;
using TomlDocument = std::map<std::string, TomlSection>;

TomlDocument parse_toml(const std::string& text);

/// Builds a scenario from a config document. Missing keys keep their defaults;
/// unknown sections or keys are rejected.
Scenario scenario_from_toml(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical text form: every key, fixed order, round-trip precision.
std::string scenario_to_toml(const Scenario& scenario);

}  // namespace hexprint
