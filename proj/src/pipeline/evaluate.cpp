#include "pipeline/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "io/flo_io.hpp"
#include "io/image_io.hpp"
#include "metrics/metrics.hpp"
#include "pipeline/provider.hpp"
#include "pipeline/run.hpp"
#include "warp/warp.hpp"

namespace evrecon::pipeline {
namespace fs = std::filesystem;

void write_frame_dir(const fs::path& dir, std::span<const Image> frames, std::span<const double> times,
                     std::span<const FlowField> flows, int bit_depth) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec && fs::is_directory(dir), ErrorKind::io, "cannot create directory " + dir.string());
  for (std::size_t i = 0; i < frames.size(); ++i)
    io::write_image(frames[i], dir / frame_file_name(static_cast<int>(i)), bit_depth);
  for (std::size_t i = 0; i < flows.size(); ++i) io::write_flo(flows[i], dir / flow_file_name(static_cast<int>(i)));
  if (!times.empty()) {
    std::string text;
    char buf[40];
    for (double t : times) {
      std::snprintf(buf, sizeof buf, "%.17g\n", t);
      text += buf;
    }
    std::ofstream out(dir / "timestamps.txt", std::ios::binary);
    out << text;
    require(static_cast<bool>(out), ErrorKind::io, "cannot write " + (dir / "timestamps.txt").string());
  }
}

FrameSet read_frame_dir(const fs::path& dir) {
  require(fs::is_directory(dir), ErrorKind::io, "not a directory: " + dir.string());
  FrameSet set;
  for (int i = 0;; ++i) {
    fs::path png = dir / frame_file_name(i, ".png");
    fs::path pgm = dir / frame_file_name(i, ".pgm");
    if (fs::exists(png)) set.frames.push_back(io::read_image(png));
    else if (fs::exists(pgm)) set.frames.push_back(io::read_image(pgm));
    else break;
  }
  for (int i = 0;; ++i) {
    fs::path flo = dir / flow_file_name(i);
    if (!fs::exists(flo)) break;
    set.flows.push_back(io::read_flo(flo));
  }
  const fs::path ts = dir / "timestamps.txt";
  if (fs::exists(ts)) {
    std::ifstream in(ts);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream ls(line);
      double t;
      require(static_cast<bool>(ls >> t) && std::isfinite(t), ErrorKind::format,
              ts.string() + ":" + std::to_string(lineno) + ": bad timestamp");
      set.times.push_back(t);
    }
    require(set.times.size() == set.frames.size(), ErrorKind::format,
            ts.string() + ": timestamp count does not match frame count");
  }
  return set;
}

std::size_t nearest_index(std::span<const double> times, double t) {
  require(!times.empty(), ErrorKind::parameter, "no timestamps to match against");
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); ++i)
    if (std::fabs(times[i] - t) < std::fabs(times[best] - t)) best = i;
  return best;
}

Report evaluate(const FrameSet& pred, const FrameSet* ref, const EvaluateOptions& options) {
  Report report;
  std::vector<encode::EventGroup> groups;
  if (options.events) groups = step_groups(*options.events, options.events_per_group);

  const bool by_time = ref && !pred.times.empty() && !ref->times.empty();
  const std::size_t steps = std::max(pred.frames.size(), pred.flows.size());
  for (std::size_t i = 0; i < steps; ++i) {
    StepRecord rec;
    rec.index = static_cast<int>(i);
    if (i < pred.times.size()) rec.t_end = pred.times[i];
    if (i < groups.size()) {
      rec.n_events = groups[i].events.size();
      rec.partial = groups[i].partial;
      rec.t_start = groups[i].events.t_start;
      rec.t_end = groups[i].events.t_end;
      if (i < pred.flows.size()) {
        try {
          rec.fwl = warp::fwl(groups[i].events, pred.flows[i], groups[i].events.t_end);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::numeric) throw;
          report.warnings.push_back("step " + std::to_string(i) + ": FWL undefined");
        }
      }
    }
    if (ref && !ref->frames.empty() && i < pred.frames.size()) {
      std::size_t j = by_time ? nearest_index(ref->times, pred.times[i]) : i;
      if (j < ref->frames.size()) {
        Image a = pred.frames[i];
        Image b = ref->frames[j];
        if (options.normalize) {
          a = io::normalize_range(a);
          b = io::normalize_range(b);
        }
        rec.mse = metrics::mse(a, b);
        if (a.width() >= 11 && a.height() >= 11) rec.ssim = metrics::ssim(a, b);
      }
    }
    if (ref && i < pred.flows.size() && i < ref->flows.size()) {
      rec.epe = metrics::epe(pred.flows[i], ref->flows[i]);
      rec.out_pct = metrics::outlier_pct(pred.flows[i], ref->flows[i]);
    }
    report.steps.push_back(rec);
  }
  return report;
}

}  // namespace evrecon::pipeline
