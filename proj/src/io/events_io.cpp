#include "io/events_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "io/bytes.hpp"

namespace evrecon::io {
namespace {

constexpr char kMagic[16] = {'E', 'V', 'S', 'T', '0', '0', '0', '1', 0, 0, 0, 0, 0, 0, 0, 0};
constexpr std::size_t kRecord = 13;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::uint8_t> encode_events(const EventStream& s) {
  s.validate();
  require(s.width > 0 && s.height > 0 && s.width <= 65536 && s.height <= 65536, ErrorKind::format,
          "event stream geometry does not fit the binary format");
  ByteWriter w;
  w.put_bytes(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(s.width));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(s.height));
  w.put<std::uint64_t>(s.events.size());
  w.put<double>(s.t_start);
  w.put<double>(s.t_end);
  for (const auto& e : s.events) {
    w.put<std::uint16_t>(static_cast<std::uint16_t>(e.x));
    w.put<std::uint16_t>(static_cast<std::uint16_t>(e.y));
    w.put<double>(e.t);
    w.put<std::int8_t>(static_cast<std::int8_t>(e.polarity));
  }
  return std::move(w.bytes());
}

EventStream decode_events(const std::vector<std::uint8_t>& bytes) {
  require(bytes.size() >= sizeof kMagic && std::memcmp(bytes.data(), kMagic, sizeof kMagic) == 0,
          ErrorKind::format, "event file: bad magic");
  ByteReader r(bytes.data() + sizeof kMagic, bytes.size() - sizeof kMagic, "event file");
  EventStream s;
  s.width = static_cast<int>(r.get<std::uint32_t>());
  s.height = static_cast<int>(r.get<std::uint32_t>());
  const auto count = r.get<std::uint64_t>();
  s.t_start = r.get<double>();
  s.t_end = r.get<double>();
  require(count <= r.remaining() / kRecord, ErrorKind::format, "event file: truncated");
  require(r.remaining() == count * kRecord, ErrorKind::format, "event file: trailing bytes");
  s.events.resize(count);
  for (auto& e : s.events) {
    e.x = r.get<std::uint16_t>();
    e.y = r.get<std::uint16_t>();
    e.t = r.get<double>();
    e.polarity = r.get<std::int8_t>();
  }
  s.validate();
  return s;
}

std::string events_to_text(const EventStream& s) {
  s.validate();
  std::string out = "# evst " + std::to_string(s.width) + " " + std::to_string(s.height) + "\n";
  out += "# window " + fmt_double(s.t_start) + " " + fmt_double(s.t_end) + "\n";
  for (const auto& e : s.events)
    out += fmt_double(e.t) + " " + std::to_string(e.x) + " " + std::to_string(e.y) + " " +
           std::to_string(e.polarity) + "\n";
  return out;
}

EventStream events_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  EventStream s;
  bool header = false;
  bool window = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, tag;
      ls >> hash >> tag;
      if (tag == "evst") {
        require(static_cast<bool>(ls >> s.width >> s.height), ErrorKind::format, "event text: bad header");
        header = true;
      } else if (tag == "window") {
        require(static_cast<bool>(ls >> s.t_start >> s.t_end), ErrorKind::format, "event text: bad window");
        window = true;
      }
      continue;
    }
    require(header, ErrorKind::format, "event text: missing '# evst W H' header");
    Event e;
    require(static_cast<bool>(ls >> e.t >> e.x >> e.y >> e.polarity), ErrorKind::format,
            "event text: malformed line " + std::to_string(lineno));
    s.events.push_back(e);
  }
  require(header, ErrorKind::format, "event text: missing '# evst W H' header");
  if (!window && !s.events.empty()) {
    s.t_start = s.events.front().t;
    s.t_end = s.events.back().t;
  }
  s.validate();
  return s;
}

void write_events(const EventStream& s, const std::filesystem::path& path, EventFormat format) {
  if (format == EventFormat::binary) {
    write_file(path, encode_events(s));
  } else {
    const std::string text = events_to_text(s);
    write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
  }
}

EventStream read_events(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "EVST", 4) == 0) return decode_events(bytes);
  if (!bytes.empty() && bytes[0] == '#') return events_from_text(std::string(bytes.begin(), bytes.end()));
  fail(ErrorKind::format, path.string() + ": unrecognised event file (bad magic)");
}

}  // namespace evrecon::io
