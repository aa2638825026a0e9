#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "core/types.hpp"
#include "eventsim/scene.hpp"

namespace evrecon::pipeline {

// Source of the flow F_{t-1 -> t} used to warp the previous reconstruction
// into the current step's window.
class FlowProvider {
 public:
  virtual ~FlowProvider() = default;
  // Flow over [t0, t1] for reconstruction step `step` on a width x height grid.
  virtual FlowField flow(int step, double t0, double t1, int width, int height) = 0;
  virtual std::string describe() const = 0;
};

class ZeroFlowProvider final : public FlowProvider {
 public:
  FlowField flow(int step, double t0, double t1, int width, int height) override;
  std::string describe() const override { return "zero"; }
};

// Exact flow of the simulated scene that produced the events.
class GroundTruthFlowProvider final : public FlowProvider {
 public:
  explicit GroundTruthFlowProvider(sim::SceneConfig scene);
  FlowField flow(int step, double t0, double t1, int width, int height) override;
  std::string describe() const override { return "ground_truth"; }

 private:
  sim::Scene scene_;
};

// One `flow_NNNN.flo` per step in a directory.
class ExternalFlowProvider final : public FlowProvider {
 public:
  explicit ExternalFlowProvider(std::filesystem::path dir);
  FlowField flow(int step, double t0, double t1, int width, int height) override;
  std::string describe() const override { return "external"; }

 private:
  std::filesystem::path dir_;
};

std::string flow_file_name(int step);
std::string frame_file_name(int index, const std::string& extension = ".png");

}  // namespace evrecon::pipeline
