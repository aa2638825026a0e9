#include "pipeline/report.hpp"

#include <cstdio>
#include <sstream>

#include "core/error.hpp"

namespace evrecon::pipeline {
namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

using Field = std::optional<double> StepRecord::*;
constexpr std::pair<const char*, Field> kMetricFields[] = {
    {"fwl", &StepRecord::fwl},   {"mse", &StepRecord::mse},         {"ssim", &StepRecord::ssim},
    {"epe", &StepRecord::epe},   {"out_pct", &StepRecord::out_pct}, {"wall_ms", &StepRecord::wall_ms},
};

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace

json report_to_json(const Report& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    json j = {{"index", s.index}, {"n_events", s.n_events}, {"partial", s.partial},
              {"t_start", s.t_start}, {"t_end", s.t_end}};
    for (const auto& [key, field] : kMetricFields) j[key] = opt(s.*field);
    steps.push_back(std::move(j));
  }
  json means = json::object();
  for (const auto& [key, field] : kMetricFields) {
    double sum = 0.0;
    int n = 0;
    for (const auto& s : report.steps)
      if (s.*field) {
        sum += *(s.*field);
        ++n;
      }
    means[key] = n > 0 ? json(sum / n) : json(nullptr);
  }
  json out = {{"steps", std::move(steps)}, {"means", std::move(means)}, {"config_echo", report.config_echo}};
  if (!report.warnings.empty()) out["warnings"] = report.warnings;
  return out;
}

Report report_from_json(const json& j) {
  Report r;
  try {
    for (const auto& s : j.at("steps")) {
      StepRecord rec;
      rec.index = s.at("index").get<int>();
      rec.n_events = s.at("n_events").get<std::size_t>();
      rec.partial = s.value("partial", false);
      rec.t_start = s.value("t_start", 0.0);
      rec.t_end = s.value("t_end", 0.0);
      for (const auto& [key, field] : kMetricFields) rec.*field = get_opt(s, key);
      r.steps.push_back(rec);
    }
    if (j.contains("config_echo")) r.config_echo = j.at("config_echo");
    if (j.contains("warnings")) r.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail(ErrorKind::format, std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string report_to_csv(const Report& report) {
  std::ostringstream out;
  out << "index,n_events,partial,t_start,t_end";
  for (const auto& [key, field] : kMetricFields) out << ',' << key;
  out << '\n';
  for (const auto& s : report.steps) {
    out << s.index << ',' << s.n_events << ',' << (s.partial ? 1 : 0) << ',' << csv_number(s.t_start) << ','
        << csv_number(s.t_end);
    for (const auto& [key, field] : kMetricFields) out << ',' << csv_number(s.*field);
    out << '\n';
  }
  return out.str();
}

}  // namespace evrecon::pipeline
