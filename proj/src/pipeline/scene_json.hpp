#pragma once

#include <filesystem>

#include "eventsim/scene.hpp"
#include "eventsim/simulator.hpp"
#include "json.hpp"

namespace evrecon::pipeline {

nlohmann::json scene_to_json(const sim::SceneConfig& scene);
// Malformed documents raise a format error.
sim::SceneConfig scene_from_json(const nlohmann::json& j);

void write_scene(const sim::SceneConfig& scene, const std::filesystem::path& path);
sim::SceneConfig read_scene(const std::filesystem::path& path);

nlohmann::json sim_params_to_json(const sim::SimParams& p);
// Overlays the keys present in `j` onto `base`; unknown keys are a config error.
sim::SimParams sim_params_from_json(const nlohmann::json& j, sim::SimParams base = {});

}  // namespace evrecon::pipeline
