#pragma once

#include <vector>

#include "core/events.hpp"
#include "core/types.hpp"

namespace evrecon::encode {

struct VoxelGrid {
  Tensor data;  // bins x H x W signed polarity mass
  double t_start = 0.0;
  double t_end = 0.0;

  int bins() const noexcept { return data.channels(); }
  int height() const noexcept { return data.height(); }
  int width() const noexcept { return data.width(); }
};

// Each polarity is split linearly between the two temporal bins around
// t* = (t - t_start) / (t_end - t_start) * (B - 1). The window is closed on
// both ends.
VoxelGrid build_voxel_grid(const EventStream& events, int bins, double t_start, double t_end);

// Divides by the largest absolute entry; all-zero grids are returned unchanged.
void normalize_max_abs(VoxelGrid& grid);

// Sum over bins.
Image temporal_marginal(const VoxelGrid& grid);

struct EventGroup {
  EventStream events;
  bool partial = false;
};

// Consecutive disjoint groups of exactly `count` events; a trailing short
// group is kept and flagged. Each group's window spans its own events.
std::vector<EventGroup> slice_by_count(const EventStream& events, std::size_t count);

// Signed polarity sum per pixel.
Image event_image(const EventStream& events);

}  // namespace evrecon::encode
