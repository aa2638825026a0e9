#include "core/events.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace evrecon {

bool event_before(const Event& a, const Event& b) noexcept {
  return std::tie(a.t, a.y, a.x, a.polarity) < std::tie(b.t, b.y, b.x, b.polarity);
}

void EventStream::validate() const {
  require(width > 0 && height > 0, ErrorKind::format, "event stream has empty sensor geometry");
  require(t_end >= t_start, ErrorKind::format, "event stream window is reversed");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    const std::string where = "event " + std::to_string(i);
    require(e.x >= 0 && e.x < width && e.y >= 0 && e.y < height, ErrorKind::format,
            where + ": coordinates out of range");
    require(e.polarity == 1 || e.polarity == -1, ErrorKind::format, where + ": bad polarity");
    require(e.t >= t_start && e.t <= t_end, ErrorKind::format, where + ": timestamp outside window");
    if (i > 0)
      require(events[i - 1].t <= e.t, ErrorKind::format, where + ": timestamps decrease");
  }
}

void EventStream::sort() { std::sort(events.begin(), events.end(), event_before); }

EventStream negated(const EventStream& s) {
  EventStream out = s;
  for (auto& e : out.events) e.polarity = -e.polarity;
  return out;
}

}  // namespace evrecon
