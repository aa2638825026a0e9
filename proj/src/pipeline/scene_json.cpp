#include "pipeline/scene_json.hpp"

#include <fstream>
#include <set>

#include "io/bytes.hpp"

namespace evrecon::pipeline {
namespace {

using nlohmann::json;

const char* texture_name(sim::TextureKind k) {
  switch (k) {
    case sim::TextureKind::checker: return "checker";
    case sim::TextureKind::value_noise: return "value_noise";
    case sim::TextureKind::bars: return "bars";
    case sim::TextureKind::image: return "image";
  }
  return "?";
}

sim::TextureKind texture_kind(const std::string& s) {
  if (s == "checker") return sim::TextureKind::checker;
  if (s == "value_noise") return sim::TextureKind::value_noise;
  if (s == "bars") return sim::TextureKind::bars;
  if (s == "image") return sim::TextureKind::image;
  fail(ErrorKind::format, "unknown texture kind '" + s + "'");
}

json layer_json(const sim::Layer& l) {
  json tex = {{"kind", texture_name(l.texture.kind)}, {"seed", l.texture.seed}, {"scale", l.texture.scale}};
  if (l.texture.kind == sim::TextureKind::image) tex["path"] = l.texture.path;
  return {{"texture", tex},
          {"pose", {{"cx", l.pose.cx}, {"cy", l.pose.cy}, {"angle", l.pose.angle}, {"scale", l.pose.scale}}},
          {"velocity",
           {{"vx", l.velocity.vx}, {"vy", l.velocity.vy}, {"omega", l.velocity.omega},
            {"scale_rate", l.velocity.scale_rate}}}};
}

sim::Layer layer_from(const json& j) {
  sim::Layer l;
  const json& t = j.at("texture");
  l.texture.kind = texture_kind(t.at("kind").get<std::string>());
  l.texture.seed = t.value("seed", std::uint64_t{0});
  l.texture.scale = t.value("scale", 8.0);
  l.texture.path = t.value("path", std::string());
  const json& p = j.at("pose");
  l.pose = {p.at("cx").get<double>(), p.at("cy").get<double>(), p.value("angle", 0.0), p.value("scale", 1.0)};
  if (j.contains("velocity")) {
    const json& v = j.at("velocity");
    l.velocity = {v.value("vx", 0.0), v.value("vy", 0.0), v.value("omega", 0.0), v.value("scale_rate", 0.0)};
  }
  return l;
}

}  // namespace

json scene_to_json(const sim::SceneConfig& scene) {
  json objects = json::array();
  for (const auto& o : scene.objects) {
    json j = layer_json(o.layer);
    j["footprint"] = o.footprint == sim::Footprint::rectangle ? "rectangle" : "ellipse";
    j["half_width"] = o.half_width;
    j["half_height"] = o.half_height;
    objects.push_back(std::move(j));
  }
  return {{"width", scene.width},
          {"height", scene.height},
          {"duration", scene.duration},
          {"background", layer_json(scene.background)},
          {"objects", std::move(objects)}};
}

sim::SceneConfig scene_from_json(const json& j) {
  sim::SceneConfig s;
  try {
    s.width = j.at("width").get<int>();
    s.height = j.at("height").get<int>();
    s.duration = j.at("duration").get<double>();
    s.background = layer_from(j.at("background"));
    for (const auto& o : j.value("objects", json::array())) {
      sim::SceneObject obj;
      obj.layer = layer_from(o);
      const std::string fp = o.value("footprint", std::string("rectangle"));
      require(fp == "rectangle" || fp == "ellipse", ErrorKind::format, "unknown footprint '" + fp + "'");
      obj.footprint = fp == "rectangle" ? sim::Footprint::rectangle : sim::Footprint::ellipse;
      obj.half_width = o.at("half_width").get<double>();
      obj.half_height = o.at("half_height").get<double>();
      s.objects.push_back(std::move(obj));
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::format, std::string("malformed scene description: ") + e.what());
  }
  s.object_count = static_cast<int>(s.objects.size());
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorKind::format, std::string("invalid scene description: ") + e.what());
  }
  return s;
}

void write_scene(const sim::SceneConfig& scene, const std::filesystem::path& path) {
  const std::string text = scene_to_json(scene).dump(2) + "\n";
  io::write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

sim::SceneConfig read_scene(const std::filesystem::path& path) {
  const auto bytes = io::read_file(path);
  const json j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  require(!j.is_discarded(), ErrorKind::format, path.string() + ": not valid JSON");
  return scene_from_json(j);
}

json sim_params_to_json(const sim::SimParams& p) {
  return {{"threshold_mean", p.threshold_mean},
          {"threshold_std", p.threshold_std},
          {"neg_pos_ratio_mean", p.neg_pos_ratio_mean},
          {"neg_pos_ratio_std", p.neg_pos_ratio_std},
          {"cutoff_hz", p.cutoff_hz},
          {"refractory_s", p.refractory_s},
          {"leak_rate_hz", p.leak_rate_hz},
          {"shot_noise_hz", p.shot_noise_hz},
          {"seed", p.seed}};
}

sim::SimParams sim_params_from_json(const json& j, sim::SimParams base) {
  require(j.is_object(), ErrorKind::config, "simulator parameters must be a JSON object");
  const std::pair<const char*, double sim::SimParams::*> fields[] = {
      {"threshold_mean", &sim::SimParams::threshold_mean},
      {"threshold_std", &sim::SimParams::threshold_std},
      {"neg_pos_ratio_mean", &sim::SimParams::neg_pos_ratio_mean},
      {"neg_pos_ratio_std", &sim::SimParams::neg_pos_ratio_std},
      {"cutoff_hz", &sim::SimParams::cutoff_hz},
      {"refractory_s", &sim::SimParams::refractory_s},
      {"leak_rate_hz", &sim::SimParams::leak_rate_hz},
      {"shot_noise_hz", &sim::SimParams::shot_noise_hz},
  };
  for (const auto& [key, value] : j.items()) {
    bool known = key == "seed";
    for (const auto& [name, field] : fields)
      if (key == name) {
        require(value.is_number(), ErrorKind::config, "simulator." + key + " must be a number");
        base.*field = value.get<double>();
        known = true;
      }
    if (key == "seed") {
      require(value.is_number_unsigned(), ErrorKind::config, "simulator.seed must be a nonnegative integer");
      base.seed = value.get<std::uint64_t>();
    }
    require(known, ErrorKind::config, "unknown simulator parameter '" + key + "'");
  }
  try {
    base.validate();
  } catch (const Error& e) {
    fail(ErrorKind::config, e.what());
  }
  return base;
}

}  // namespace evrecon::pipeline
