#include "pipeline/run.hpp"

#include <chrono>

#include "encode/voxel.hpp"
#include "warp/warp.hpp"

namespace evrecon::pipeline {
namespace {

Error with_step(const Error& e, int step) {
  const std::string msg = e.what();
  if (msg.rfind("step ", 0) == 0) return e;
  return Error(e.kind(), "step " + std::to_string(step) + ": " + msg);
}

}  // namespace

const char* to_string(WarpMode mode) {
  switch (mode) {
    case WarpMode::none: return "none";
    case WarpMode::frame: return "frame";
    case WarpMode::frame_and_codes: return "frame_and_codes";
  }
  return "?";
}

WarpMode warp_mode_from_string(const std::string& s) {
  if (s == "none") return WarpMode::none;
  if (s == "frame") return WarpMode::frame;
  if (s == "frame_and_codes") return WarpMode::frame_and_codes;
  fail(ErrorKind::config, "unknown warp mode '" + s + "' (none, frame, frame_and_codes)");
}

void RunConfig::validate() const {
  require(bins >= 1, ErrorKind::config, "bins must be at least 1");
  require(events_per_group >= 1, ErrorKind::config, "events per group must be at least 1");
}

std::vector<encode::EventGroup> step_groups(const EventStream& events, std::size_t events_per_group) {
  auto groups = encode::slice_by_count(events, events_per_group);
  double prev_end = events.t_start;
  for (auto& g : groups) {
    EventStream& s = g.events;
    s.t_start = std::min(prev_end, s.events.front().t);
    s.t_end = s.events.back().t;
    // A group whose events share one timestamp still needs a proper window.
    if (!(s.t_end > s.t_start)) s.t_end = s.t_start + 1e-9;
    prev_end = s.t_end;
  }
  return groups;
}

RunResult run_reconstruction(const EventStream& events, const RunConfig& cfg, FlowProvider& provider,
                             const sparse::CistaWeights& weights) {
  cfg.validate();
  events.validate();
  require(weights.arch().bins == cfg.bins, ErrorKind::config,
          "weights expect " + std::to_string(weights.arch().bins) + " bins, run configured with " +
              std::to_string(cfg.bins));
  const int W = events.width;
  const int H = events.height;
  require(W % 2 == 0 && H % 2 == 0 && W > 0 && H > 0, ErrorKind::dimension,
          "sensor width and height must be even");

  RunResult out;
  if (cfg.emit_initial_frame || events.empty()) {
    out.frames.emplace_back(W, H);
    out.frame_times.push_back(events.t_start);
    out.flows.emplace_back(W, H);
  }
  if (events.empty()) {
    out.report.warnings.push_back("empty event stream: emitted a single zero frame");
    return out;
  }

  sparse::CistaState state = sparse::zero_state(weights.arch(), H, W);
  Image frame(W, H);
  const auto groups = step_groups(events, cfg.events_per_group);

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const int step = static_cast<int>(gi);
    const auto started = std::chrono::steady_clock::now();
    const EventStream& group = groups[gi].events;

    StepRecord rec;
    rec.index = step;
    rec.n_events = group.size();
    rec.partial = groups[gi].partial;
    rec.t_start = group.t_start;
    rec.t_end = group.t_end;
    try {
      FlowField flow = provider.flow(step, group.t_start, group.t_end, W, H);
      require(flow.width() == W && flow.height() == H, ErrorKind::provider, "flow size mismatch");
      require(flow.is_sane(), ErrorKind::numeric, "provider returned a non-finite or implausible flow");

      encode::VoxelGrid grid = encode::build_voxel_grid(group, cfg.bins, group.t_start, group.t_end);
      if (cfg.normalize_voxels) encode::normalize_max_abs(grid);

      Image frame_in = frame;
      Tensor codes_in = state.codes;
      if (cfg.warp != WarpMode::none) frame_in = warp::forward_warp_frame(frame, flow);
      if (cfg.warp == WarpMode::frame_and_codes)
        codes_in = warp::forward_warp_codes(state.codes, warp::downsample_flow(flow));

      auto result = sparse::cista_forward(grid, frame_in, codes_in, state, weights);
      frame = std::move(result.frame);
      state = std::move(result.state);

      try {
        rec.fwl = warp::fwl(group, flow, group.t_end);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::numeric) throw;
        out.report.warnings.push_back("step " + std::to_string(step) + ": FWL undefined (" + e.what() + ")");
      }
      out.frames.push_back(frame);
      out.frame_times.push_back(group.t_end);
      out.flows.push_back(std::move(flow));
    } catch (const Error& e) {
      throw with_step(e, step);
    }
    if (cfg.record_timings)
      rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    out.report.steps.push_back(rec);
  }
  return out;
}

}  // namespace evrecon::pipeline
