#pragma once

#include <vector>

#include "core/events.hpp"
#include "core/types.hpp"
#include "encode/voxel.hpp"
#include "pipeline/provider.hpp"
#include "pipeline/report.hpp"
#include "sparse/cista.hpp"

namespace evrecon::pipeline {

enum class WarpMode {
  none,             // previous frame and codes enter unwarped
  frame,            // only the previous frame is warped
  frame_and_codes,  // frame and codes (with the flow downsampled to the code grid)
};

const char* to_string(WarpMode mode);
WarpMode warp_mode_from_string(const std::string& s);

struct RunConfig {
  int bins = 5;
  std::size_t events_per_group = 15000;
  WarpMode warp = WarpMode::frame_and_codes;
  bool normalize_voxels = false;
  bool record_timings = false;
  // Prepend the zero initial reconstruction to the emitted frames.
  bool emit_initial_frame = false;

  void validate() const;
};

struct RunResult {
  std::vector<Image> frames;
  std::vector<double> frame_times;  // end of each step's window
  std::vector<FlowField> flows;     // flow used at each step
  Report report;
};

// Groups of `events_per_group` events with their reconstruction windows:
// each window runs from the previous group's end (the stream start for the
// first) to the group's last event.
std::vector<encode::EventGroup> step_groups(const EventStream& events, std::size_t events_per_group);

// Recursive reconstruction: the stream is cut into groups of
// `events_per_group`; each step warps the previous frame (and codes) with
// the provider's flow over the step window, builds the voxel grid and runs
// one cista_forward. State starts at zero. An empty stream yields a single
// zero frame and a warning.
RunResult run_reconstruction(const EventStream& events, const RunConfig& cfg, FlowProvider& provider,
                             const sparse::CistaWeights& weights);

}  // namespace evrecon::pipeline
