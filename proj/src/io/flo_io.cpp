#include "io/flo_io.hpp"

#include <cmath>

#include "io/bytes.hpp"

namespace evrecon::io {
namespace {
constexpr float kTag = 202021.25f;
}

std::vector<std::uint8_t> encode_flo(const FlowField& flow) {
  ByteWriter w;
  w.put<float>(kTag);
  w.put<std::int32_t>(flow.width());
  w.put<std::int32_t>(flow.height());
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x) {
      const float u = flow.u(x, y);
      const float v = flow.v(x, y);
      require(!std::isnan(u) && !std::isnan(v), ErrorKind::numeric, "refusing to write NaN flow");
      w.put<float>(u);
      w.put<float>(v);
    }
  return std::move(w.bytes());
}

FlowField decode_flo(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes.data(), bytes.size(), ".flo");
  require(r.get<float>() == kTag, ErrorKind::format, ".flo: wrong magic");
  const auto w = r.get<std::int32_t>();
  const auto h = r.get<std::int32_t>();
  require(w > 0 && h > 0, ErrorKind::format, ".flo: bad dimensions");
  require(r.remaining() == static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 8, ErrorKind::format,
          ".flo: size mismatch");
  FlowField flow(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      flow.u(x, y) = r.get<float>();
      flow.v(x, y) = r.get<float>();
    }
  return flow;
}

void write_flo(const FlowField& flow, const std::filesystem::path& path) {
  write_file(path, encode_flo(flow));
}

FlowField read_flo(const std::filesystem::path& path) { return decode_flo(read_file(path)); }

}  // namespace evrecon::io
