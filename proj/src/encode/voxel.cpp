#include "encode/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evrecon::encode {

VoxelGrid build_voxel_grid(const EventStream& events, int bins, double t_start, double t_end) {
  require(bins >= 1, ErrorKind::parameter, "voxel grid needs at least one bin");
  require(t_end > t_start, ErrorKind::parameter, "voxel window must be nonempty");
  require(events.width > 0 && events.height > 0, ErrorKind::dimension, "event stream has no geometry");

  VoxelGrid grid{Tensor(bins, events.height, events.width), t_start, t_end};
  const double span = t_end - t_start;
  const int last = bins - 1;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events.events[i];
    require(e.t >= t_start && e.t <= t_end, ErrorKind::parameter,
            "event " + std::to_string(i) + " lies outside the voxel window");
    require(e.x >= 0 && e.x < events.width && e.y >= 0 && e.y < events.height,
            ErrorKind::parameter, "event " + std::to_string(i) + " lies outside the sensor");
    const double tn = (e.t - t_start) / span * last;
    const int lo = std::min(static_cast<int>(std::floor(tn)), last);
    const double frac = tn - lo;
    if (lo == last || frac == 0.0) {
      grid.data(lo, e.y, e.x) += e.polarity;
    } else {
      grid.data(lo, e.y, e.x) += e.polarity * (1.0 - frac);
      grid.data(lo + 1, e.y, e.x) += e.polarity * frac;
    }
  }
  return grid;
}

void normalize_max_abs(VoxelGrid& grid) {
  double peak = 0.0;
  for (double v : grid.data.values()) peak = std::max(peak, std::fabs(v));
  if (peak == 0.0) return;
  for (double& v : grid.data.values()) v /= peak;
}

Image temporal_marginal(const VoxelGrid& grid) {
  Image img(grid.width(), grid.height());
  for (int b = 0; b < grid.bins(); ++b) {
    auto plane = grid.data.plane(b);
    auto px = img.pixels();
    for (std::size_t i = 0; i < plane.size(); ++i) px[i] += plane[i];
  }
  return img;
}

std::vector<EventGroup> slice_by_count(const EventStream& events, std::size_t count) {
  require(count >= 1, ErrorKind::parameter, "group size must be at least 1");
  std::vector<EventGroup> groups;
  for (std::size_t begin = 0; begin < events.size(); begin += count) {
    const std::size_t end = std::min(events.size(), begin + count);
    EventGroup g;
    g.events.width = events.width;
    g.events.height = events.height;
    g.events.events.assign(events.events.begin() + static_cast<long>(begin),
                           events.events.begin() + static_cast<long>(end));
    g.events.t_start = g.events.events.front().t;
    g.events.t_end = g.events.events.back().t;
    g.partial = end - begin < count;
    groups.push_back(std::move(g));
  }
  return groups;
}

Image event_image(const EventStream& events) {
  Image img(events.width, events.height);
  for (const auto& e : events.events) img(e.x, e.y) += e.polarity;
  return img;
}

}  // namespace evrecon::encode
