#include "pipeline/provider.hpp"

#include <cstdio>

#include "io/flo_io.hpp"

namespace evrecon::pipeline {

std::string flow_file_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "flow_%04d.flo", step);
  return buf;
}

std::string frame_file_name(int index, const std::string& extension) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04d", index);
  return buf + extension;
}

FlowField ZeroFlowProvider::flow(int, double, double, int width, int height) {
  return FlowField(width, height);
}

GroundTruthFlowProvider::GroundTruthFlowProvider(sim::SceneConfig scene) : scene_(std::move(scene)) {}

FlowField GroundTruthFlowProvider::flow(int step, double t0, double t1, int width, int height) {
  const auto& cfg = scene_.config();
  require(cfg.width == width && cfg.height == height, ErrorKind::provider,
          "step " + std::to_string(step) + ": scene size does not match the event stream");
  return sim::ground_truth_flow(scene_, t0, t1);
}

ExternalFlowProvider::ExternalFlowProvider(std::filesystem::path dir) : dir_(std::move(dir)) {
  require(std::filesystem::is_directory(dir_), ErrorKind::provider,
          "flow directory not found: " + dir_.string());
}

FlowField ExternalFlowProvider::flow(int step, double, double, int width, int height) {
  const auto path = dir_ / flow_file_name(step);
  require(std::filesystem::exists(path), ErrorKind::provider,
          "step " + std::to_string(step) + ": flow provider exhausted (missing " + path.string() + ")");
  FlowField f = io::read_flo(path);
  require(f.width() == width && f.height() == height, ErrorKind::provider,
          "step " + std::to_string(step) + ": flow size does not match the event stream");
  return f;
}

}  // namespace evrecon::pipeline
