#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace evrecon::pipeline {

// Reads a configuration object from a .toml file or, for any other
// extension, a JSON file. TOML tables become JSON objects; dates and times
// become strings. Any failure is a config error.
nlohmann::json load_config(const std::filesystem::path& path);

nlohmann::json toml_to_json(const std::string& text, const std::string& source = "config");

// Section `name` of a config document, or an empty object.
nlohmann::json config_section(const nlohmann::json& config, const char* name);

}  // namespace evrecon::pipeline
