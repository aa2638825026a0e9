#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace evrecon::sparse {

struct ParamTensor {
  std::vector<int> shape;
  std::vector<float> data;

  static ParamTensor zeros(std::vector<int> shape);
  std::size_t numel() const;
  bool operator==(const ParamTensor&) const = default;
};

// Read-only view of a 4-D [A, B, k, k] filter bank. conv2d with it maps B
// channels to A channels; conv_transpose2d maps A channels to B channels.
struct KernelView {
  const float* w = nullptr;
  int a = 0;
  int b = 0;
  int k = 0;

  explicit KernelView(const ParamTensor& t);
  float operator()(int ia, int ib, int ky, int kx) const {
    return w[((static_cast<std::size_t>(ia) * b + ib) * k + ky) * k + kx];
  }
};

// Convolutional dictionary pair sharing one code space. Codes live on a grid
// with half the image resolution; both dictionaries are stride-2 transposed
// convolutions from codes to full resolution.
struct DictionaryPair {
  ParamTensor analysis;   // D_X: [codes, features, k, k]
  ParamTensor synthesis;  // D_I: [codes, 1, k, k]

  int codes() const { return analysis.shape.at(0); }
  int features() const { return analysis.shape.at(1); }
  int kernel() const { return analysis.shape.at(2); }

  void validate() const;
};

// Random dictionary with unit-norm atoms.
DictionaryPair random_dictionary(int codes, int features, int kernel, std::uint64_t seed);

// Four-atom image dictionary on the half-resolution grid: a bilinear tent
// plus horizontal, vertical and diagonal detail atoms. D_X = D_I, one feature
// channel.
DictionaryPair tent_detail_dictionary();

struct CistaArch {
  int bins = 5;
  int features = 16;
  int codes = 32;
  int kernel = 3;
  int blocks = 5;
  int lsrc_channels = 4;

  void validate() const;
  bool operator==(const CistaArch&) const = default;
};

// Named tensors of the unfolded reconstruction network:
//   fusion.weight [F, B+1, k, k]   fusion.bias [F]
//   lstc.wx [4C, F, k, k]  lstc.wz [4C, C, k, k]  lstc.bias [4C]  lstc.skip [C]
//   ista.<i>.analysis [C, F, k, k]  ista.<i>.synthesis [C, F, k, k]  ista.<i>.theta [C]
//   lsrc.dict [C, 1, k, k]  lsrc.bias [1]  lsrc.wz [C, 2A, k, k]
//   lsrc.wa [2A, A, k, k]  lsrc.gate_bias [2A]  lsrc.wout [1, A, k, k]
class CistaWeights {
 public:
  CistaWeights() = default;
  // All-zero weights of the given architecture.
  explicit CistaWeights(const CistaArch& arch);

  const CistaArch& arch() const noexcept { return arch_; }
  const ParamTensor& at(const std::string& name) const;
  ParamTensor& at(const std::string& name);
  const std::map<std::string, ParamTensor>& tensors() const noexcept { return tensors_; }

  // Infers the architecture from tensor shapes and checks the full required
  // set, shape consistency, finiteness and theta >= 0. Unknown tensor names
  // are dropped and reported.
  static CistaWeights from_tensors(std::map<std::string, ParamTensor> tensors,
                                   std::vector<std::string>* warnings = nullptr);

  void validate() const;

  bool operator==(const CistaWeights&) const = default;

 private:
  CistaArch arch_;
  std::map<std::string, ParamTensor> tensors_;
};

std::map<std::string, std::vector<int>> required_shapes(const CistaArch& arch);
std::string ista_name(int block, const char* field);

CistaWeights random_weights(const CistaArch& arch, std::uint64_t seed, double scale = 1.0);

void save_weights(const CistaWeights& weights, const std::filesystem::path& path);
CistaWeights load_weights(const std::filesystem::path& path,
                          std::vector<std::string>* warnings = nullptr);

}  // namespace evrecon::sparse
