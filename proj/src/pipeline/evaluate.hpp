#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "core/events.hpp"
#include "core/types.hpp"
#include "pipeline/report.hpp"

namespace evrecon::pipeline {

// A directory of frames (frame_NNNN.png|pgm), their timestamps
// (timestamps.txt, one per line) and optional flows (flow_NNNN.flo).
struct FrameSet {
  std::vector<Image> frames;
  std::vector<double> times;  // empty when the directory has no timestamps
  std::vector<FlowField> flows;
};

void write_frame_dir(const std::filesystem::path& dir, std::span<const Image> frames,
                     std::span<const double> times, std::span<const FlowField> flows, int bit_depth = 16);
FrameSet read_frame_dir(const std::filesystem::path& dir);

// Index of the entry of `times` closest to t (the earlier one on ties).
std::size_t nearest_index(std::span<const double> times, double t);

struct EvaluateOptions {
  // Rescale both frames to [0, 1] before MSE / SSIM.
  bool normalize = false;
  // Event stream and group size used for per-step FWL with the predicted flows.
  const EventStream* events = nullptr;
  std::size_t events_per_group = 15000;
};

// One step per predicted frame or flow, whichever is more. Frames are matched to the reference by
// nearest timestamp (by index when either side lacks timestamps), flows by
// index.
Report evaluate(const FrameSet& pred, const FrameSet* ref, const EvaluateOptions& options);

}  // namespace evrecon::pipeline
