#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace evrecon::io {

enum class DType : std::uint8_t { f32 = 1, f64 = 2 };

// Named-tensor container:
//   "CWTS0001" | u32 count | count x (u16 name_len, name, u8 dtype, u8 ndim,
//   ndim x u64 dim) | tensor payloads in manifest order | u32 CRC32
// All little-endian; the CRC covers every preceding byte.
struct TensorEntry {
  std::string name;
  DType dtype = DType::f32;
  std::vector<int> shape;
  std::vector<float> f32;
  std::vector<double> f64;

  std::size_t numel() const;
};

struct TensorContainer {
  std::vector<TensorEntry> entries;

  void add_f32(std::string name, std::vector<int> shape, std::vector<float> values);
  void add_f64(std::string name, std::vector<int> shape, std::vector<double> values);
  const TensorEntry* find(const std::string& name) const;
};

std::vector<std::uint8_t> encode_container(const TensorContainer& c);
TensorContainer decode_container(const std::vector<std::uint8_t>& bytes);

void write_container(const TensorContainer& c, const std::filesystem::path& path);
TensorContainer read_container(const std::filesystem::path& path);

}  // namespace evrecon::io
