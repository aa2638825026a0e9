#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace evrecon::pipeline {

struct StepRecord {
  int index = 0;
  std::size_t n_events = 0;
  bool partial = false;
  double t_start = 0.0;
  double t_end = 0.0;
  std::optional<double> fwl;  // absent when the step's event image is flat
  std::optional<double> mse;
  std::optional<double> ssim;
  std::optional<double> epe;
  std::optional<double> out_pct;
  std::optional<double> wall_ms;  // only with timings enabled
};

struct Report {
  std::vector<StepRecord> steps;
  nlohmann::json config_echo = nlohmann::json::object();
  std::vector<std::string> warnings;
};

// {steps: [...], means: {...}, config_echo}. Absent optionals are written as
// null; means cover the steps that carry the field.
nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);
std::string report_to_csv(const Report& report);

}  // namespace evrecon::pipeline
