#include "io/container.hpp"

#include <numeric>

#include <zlib.h>

#include "io/bytes.hpp"

namespace evrecon::io {
namespace {

constexpr char kMagic[8] = {'C', 'W', 'T', 'S', '0', '0', '0', '1'};

std::uint32_t crc(const std::uint8_t* data, std::size_t n) {
  uLong c = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    c = crc32(c, data, chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

}  // namespace

std::size_t TensorEntry::numel() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t a, int d) { return a * static_cast<std::size_t>(d); });
}

void TensorContainer::add_f32(std::string name, std::vector<int> shape, std::vector<float> values) {
  TensorEntry e{std::move(name), DType::f32, std::move(shape), std::move(values), {}};
  require(e.f32.size() == e.numel(), ErrorKind::dimension, "tensor '" + e.name + "' size mismatch");
  entries.push_back(std::move(e));
}

void TensorContainer::add_f64(std::string name, std::vector<int> shape, std::vector<double> values) {
  TensorEntry e{std::move(name), DType::f64, std::move(shape), {}, std::move(values)};
  require(e.f64.size() == e.numel(), ErrorKind::dimension, "tensor '" + e.name + "' size mismatch");
  entries.push_back(std::move(e));
}

const TensorEntry* TensorContainer::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

std::vector<std::uint8_t> encode_container(const TensorContainer& c) {
  ByteWriter w;
  w.put_bytes(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(c.entries.size()));
  for (const auto& e : c.entries) {
    require(e.name.size() < 65536, ErrorKind::parameter, "tensor name too long");
    w.put<std::uint16_t>(static_cast<std::uint16_t>(e.name.size()));
    w.put_bytes(e.name.data(), e.name.size());
    w.put<std::uint8_t>(static_cast<std::uint8_t>(e.dtype));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(e.shape.size()));
    for (int d : e.shape) w.put<std::uint64_t>(static_cast<std::uint64_t>(d));
  }
  for (const auto& e : c.entries) {
    if (e.dtype == DType::f32)
      w.put_bytes(e.f32.data(), e.f32.size() * sizeof(float));
    else
      w.put_bytes(e.f64.data(), e.f64.size() * sizeof(double));
  }
  auto& bytes = w.bytes();
  const std::uint32_t sum = crc(bytes.data(), bytes.size());
  w.put<std::uint32_t>(sum);
  return std::move(bytes);
}

TensorContainer decode_container(const std::vector<std::uint8_t>& bytes) {
  require(bytes.size() >= sizeof kMagic + 8, ErrorKind::format, "tensor container: file too short");
  require(std::equal(kMagic, kMagic + sizeof kMagic, bytes.begin()), ErrorKind::format,
          "tensor container: bad magic");
  const std::size_t body = bytes.size() - 4;
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + body, 4);
  require(crc(bytes.data(), body) == stored, ErrorKind::format,
          "tensor container: checksum failure (corrupted or truncated file)");

  ByteReader r(bytes.data() + sizeof kMagic, body - sizeof kMagic, "tensor container");
  const std::uint32_t count = r.get<std::uint32_t>();
  TensorContainer c;
  for (std::uint32_t i = 0; i < count; ++i) {
    TensorEntry e;
    e.name.resize(r.get<std::uint16_t>());
    r.get_bytes(e.name.data(), e.name.size());
    const auto dtype = r.get<std::uint8_t>();
    require(dtype == 1 || dtype == 2, ErrorKind::format, "tensor '" + e.name + "': unknown dtype");
    e.dtype = static_cast<DType>(dtype);
    const auto ndim = r.get<std::uint8_t>();
    for (int d = 0; d < ndim; ++d) {
      const auto dim = r.get<std::uint64_t>();
      require(dim < (1ULL << 31), ErrorKind::format, "tensor '" + e.name + "': dimension too large");
      e.shape.push_back(static_cast<int>(dim));
    }
    c.entries.push_back(std::move(e));
  }
  for (auto& e : c.entries) {
    const std::size_t n = e.numel();
    const std::size_t width = e.dtype == DType::f32 ? 4 : 8;
    require(n <= r.remaining() / width, ErrorKind::format, "tensor '" + e.name + "': payload truncated");
    if (e.dtype == DType::f32) {
      e.f32.resize(n);
      r.get_bytes(e.f32.data(), n * 4);
    } else {
      e.f64.resize(n);
      r.get_bytes(e.f64.data(), n * 8);
    }
  }
  require(r.remaining() == 0, ErrorKind::format, "tensor container: trailing bytes");
  return c;
}

void write_container(const TensorContainer& c, const std::filesystem::path& path) {
  write_file(path, encode_container(c));
}

TensorContainer read_container(const std::filesystem::path& path) {
  return decode_container(read_file(path));
}

}  // namespace evrecon::io
