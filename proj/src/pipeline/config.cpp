#include "pipeline/config.hpp"

#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "toml.hpp"

namespace evrecon::pipeline {
namespace {

nlohmann::json convert(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, value] : *t) out[std::string(key.str())] = convert(value);
    return out;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& value : *a) out.push_back(convert(value));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  // Dates and times: keep their TOML spelling.
  std::ostringstream s;
  node.visit([&](const auto& n) { s << n; });
  return s.str();
}

}  // namespace

nlohmann::json toml_to_json(const std::string& text, const std::string& source) {
  try {
    return convert(toml::parse(text, source));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ": " << e.description();
    fail(ErrorKind::config, msg.str());
  }
}

nlohmann::json load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::config, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".toml") return toml_to_json(buf.str(), path.string());
  auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  require(!j.is_discarded(), ErrorKind::config, path.string() + ": not valid JSON");
  require(j.is_object(), ErrorKind::config, path.string() + ": top level must be an object");
  return j;
}

nlohmann::json config_section(const nlohmann::json& config, const char* name) {
  if (!config.contains(name)) return nlohmann::json::object();
  const auto& s = config.at(name);
  require(s.is_object(), ErrorKind::config, std::string("config section '") + name + "' must be an object");
  return s;
}

}  // namespace evrecon::pipeline
