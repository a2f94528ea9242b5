#pragma once

#include <map>
#include <string>
#include <vector>

#include "c2lse/harness.hpp"

namespace c2lse {

/// Minimal TOML reader covering what the experiment configs use: `key = value`
/// lines with string / integer / float / boolean / homogeneous-array values,
/// `#` comments and optional `[section]` headers (keys inside a section are
/// addressed as "section.key").
struct TomlValue {
    enum class Kind { String, Integer, Float, Boolean, Array };
    Kind kind = Kind::String;
    std::string string_value;
    long long integer_value = 0;
    double float_value = 0.0;
    bool boolean_value = false;
    std::vector<TomlValue> array;
    int line = 0;

    double as_number() const;  // integer or float
};

using TomlTable = std::map<std::string, TomlValue>;

TomlTable parse_toml(const std::string& text, const std::string& origin = "<string>");
TomlTable parse_toml_file(const std::string& path);

/// Build the experiment configuration from a config file plus command-line
/// overrides ("key=value", parsed with the same grammar; overrides win).
/// Unknown keys and type mismatches raise with the key path and expectation.
ExperimentConfig parse_config(const std::string& path, const std::vector<std::string>& overrides);

ExperimentConfig config_from_table(const TomlTable& table, const std::string& origin);

/// Full dump of a configuration with every default made explicit; feeding the
/// dump back through parse_config reproduces the same runs.
std::string resolved_config_toml(const ExperimentConfig& config);

}  // namespace c2lse
