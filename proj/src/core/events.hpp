#pragma once

#include <cstdint>
#include <vector>

#include "core/error.hpp"

namespace evrecon {

struct Event {
  int x = 0;
  int y = 0;
  double t = 0.0;  // seconds
  int polarity = 1;  // +1 or -1

  bool operator==(const Event&) const = default;
};

// Ordering used everywhere a stream is materialized: time, then (y, x, polarity).
bool event_before(const Event& a, const Event& b) noexcept;

struct EventStream {
  int width = 0;
  int height = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<Event> events;

  std::size_t size() const noexcept { return events.size(); }
  bool empty() const noexcept { return events.empty(); }

  // Throws Error(format) naming the first offending event index.
  void validate() const;

  void sort();

  bool operator==(const EventStream&) const = default;
};

// Copy of the stream with every polarity flipped.
EventStream negated(const EventStream& s);

}  // namespace evrecon
