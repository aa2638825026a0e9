#include "sparse/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "io/container.hpp"

namespace evrecon::sparse {

ParamTensor ParamTensor::zeros(std::vector<int> shape) {
  ParamTensor t;
  t.shape = std::move(shape);
  t.data.assign(t.numel(), 0.0f);
  return t;
}

std::size_t ParamTensor::numel() const {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         [](std::size_t a, int d) { return a * static_cast<std::size_t>(d); });
}

KernelView::KernelView(const ParamTensor& t) {
  require(t.shape.size() == 4 && t.shape[2] == t.shape[3], ErrorKind::dimension,
          "expected a square 4-D filter bank");
  w = t.data.data();
  a = t.shape[0];
  b = t.shape[1];
  k = t.shape[2];
}

namespace {

bool all_finite(const ParamTensor& t) {
  return std::all_of(t.data.begin(), t.data.end(), [](float v) { return std::isfinite(v); });
}

std::string shape_str(const std::vector<int>& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + std::to_string(s[i]);
  return out + "]";
}

}  // namespace

void DictionaryPair::validate() const {
  require(analysis.shape.size() == 4 && synthesis.shape.size() == 4, ErrorKind::dimension,
          "dictionaries must be 4-D filter banks");
  require(analysis.shape[2] == analysis.shape[3] && analysis.shape[2] % 2 == 1, ErrorKind::dimension,
          "dictionary filters must be square with odd size");
  require(synthesis.shape[0] == analysis.shape[0] && synthesis.shape[1] == 1 &&
              synthesis.shape[2] == analysis.shape[2] && synthesis.shape[3] == analysis.shape[3],
          ErrorKind::dimension, "synthesis dictionary shape " + shape_str(synthesis.shape) +
                                    " inconsistent with analysis " + shape_str(analysis.shape));
  require(all_finite(analysis) && all_finite(synthesis), ErrorKind::numeric,
          "dictionary has non-finite weights");
}

DictionaryPair random_dictionary(int codes, int features, int kernel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  DictionaryPair d{ParamTensor::zeros({codes, features, kernel, kernel}),
                   ParamTensor::zeros({codes, 1, kernel, kernel})};
  auto fill_atoms = [&](ParamTensor& t) {
    const std::size_t atom = t.numel() / static_cast<std::size_t>(codes);
    for (int c = 0; c < codes; ++c) {
      std::vector<double> v(atom);
      double norm = 0.0;
      for (double& x : v) {
        x = n(rng);
        norm += x * x;
      }
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < atom; ++i)
        t.data[c * atom + i] = static_cast<float>(v[i] / norm);
    }
  };
  fill_atoms(d.analysis);
  fill_atoms(d.synthesis);
  return d;
}

DictionaryPair tent_detail_dictionary() {
  const float tent[3] = {0.5f, 1.0f, 0.5f};
  const float detail[3] = {-0.5f, 1.0f, -0.5f};
  const float* rows[4] = {tent, tent, detail, detail};
  const float* cols[4] = {tent, detail, tent, detail};
  ParamTensor atoms = ParamTensor::zeros({4, 1, 3, 3});
  for (int c = 0; c < 4; ++c)
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 3; ++x) atoms.data[(c * 3 + y) * 3 + x] = rows[c][y] * cols[c][x];
  return {atoms, atoms};
}

void CistaArch::validate() const {
  require(bins >= 1 && features >= 1 && codes >= 1 && lsrc_channels >= 1, ErrorKind::config,
          "architecture channel counts must be positive");
  require(kernel >= 1 && kernel % 2 == 1, ErrorKind::config, "filter size must be odd");
  require(blocks >= 1, ErrorKind::config, "need at least one unfolded block");
}

std::string ista_name(int block, const char* field) {
  return "ista." + std::to_string(block) + "." + field;
}

std::map<std::string, std::vector<int>> required_shapes(const CistaArch& a) {
  const int k = a.kernel;
  std::map<std::string, std::vector<int>> s{
      {"fusion.weight", {a.features, a.bins + 1, k, k}},
      {"fusion.bias", {a.features}},
      {"lstc.wx", {4 * a.codes, a.features, k, k}},
      {"lstc.wz", {4 * a.codes, a.codes, k, k}},
      {"lstc.bias", {4 * a.codes}},
      {"lstc.skip", {a.codes}},
      {"lsrc.dict", {a.codes, 1, k, k}},
      {"lsrc.bias", {1}},
      {"lsrc.wz", {a.codes, 2 * a.lsrc_channels, k, k}},
      {"lsrc.wa", {2 * a.lsrc_channels, a.lsrc_channels, k, k}},
      {"lsrc.gate_bias", {2 * a.lsrc_channels}},
      {"lsrc.wout", {1, a.lsrc_channels, k, k}},
  };
  for (int i = 0; i < a.blocks; ++i) {
    s[ista_name(i, "analysis")] = {a.codes, a.features, k, k};
    s[ista_name(i, "synthesis")] = {a.codes, a.features, k, k};
    s[ista_name(i, "theta")] = {a.codes};
  }
  return s;
}

CistaWeights::CistaWeights(const CistaArch& arch) : arch_(arch) {
  arch.validate();
  for (auto& [name, shape] : required_shapes(arch)) tensors_[name] = ParamTensor::zeros(shape);
}

const ParamTensor& CistaWeights::at(const std::string& name) const {
  auto it = tensors_.find(name);
  require(it != tensors_.end(), ErrorKind::format, "missing weight tensor '" + name + "'");
  return it->second;
}

ParamTensor& CistaWeights::at(const std::string& name) {
  auto it = tensors_.find(name);
  require(it != tensors_.end(), ErrorKind::format, "missing weight tensor '" + name + "'");
  return it->second;
}

void CistaWeights::validate() const {
  arch_.validate();
  const auto shapes = required_shapes(arch_);
  for (const auto& [name, shape] : shapes) {
    const ParamTensor& t = at(name);
    require(t.shape == shape, ErrorKind::format,
            "tensor '" + name + "' has shape " + shape_str(t.shape) + ", expected " + shape_str(shape));
    require(t.data.size() == t.numel(), ErrorKind::format, "tensor '" + name + "' has wrong size");
    require(all_finite(t), ErrorKind::numeric, "tensor '" + name + "' has non-finite values");
  }
  for (int i = 0; i < arch_.blocks; ++i)
    for (float th : at(ista_name(i, "theta")).data)
      require(th >= 0.0f, ErrorKind::parameter, "negative threshold in block " + std::to_string(i));
}

CistaWeights CistaWeights::from_tensors(std::map<std::string, ParamTensor> tensors,
                                        std::vector<std::string>* warnings) {
  auto dim = [&](const char* name, std::size_t axis) {
    auto it = tensors.find(name);
    require(it != tensors.end(), ErrorKind::format, std::string("missing weight tensor '") + name + "'");
    require(it->second.shape.size() > axis, ErrorKind::format,
            std::string("tensor '") + name + "' has too few dimensions");
    return it->second.shape[axis];
  };
  CistaArch arch;
  arch.features = dim("fusion.weight", 0);
  arch.bins = dim("fusion.weight", 1) - 1;
  arch.kernel = dim("fusion.weight", 2);
  arch.codes = dim("lstc.skip", 0);
  arch.lsrc_channels = dim("lsrc.wa", 1);
  arch.blocks = 0;
  while (tensors.count(ista_name(arch.blocks, "theta"))) ++arch.blocks;
  require(arch.blocks >= 1, ErrorKind::format, "missing weight tensor '" + ista_name(0, "theta") + "'");

  CistaWeights w;
  w.arch_ = arch;
  const auto shapes = required_shapes(arch);
  for (auto& [name, t] : tensors) {
    if (shapes.count(name)) {
      w.tensors_[name] = std::move(t);
    } else if (warnings) {
      warnings->push_back("ignoring unknown weight tensor '" + name + "'");
    }
  }
  w.validate();
  return w;
}

CistaWeights random_weights(const CistaArch& arch, std::uint64_t seed, double scale) {
  CistaWeights w(arch);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (const auto& [name, shape] : required_shapes(arch)) {
    ParamTensor& t = w.at(name);
    const bool filter = t.shape.size() == 4;
    const double fan_in = filter ? static_cast<double>(t.shape[1]) * t.shape[2] * t.shape[3] : 1.0;
    const bool theta = name.ends_with(".theta");
    const double sd = theta ? 0.05 : scale / std::sqrt(fan_in) * (filter ? 1.0 : 0.1);
    for (float& v : t.data) {
      const double x = n(rng) * sd;
      v = static_cast<float>(theta ? std::fabs(x) : x);
    }
  }
  return w;
}

void save_weights(const CistaWeights& weights, const std::filesystem::path& path) {
  weights.validate();
  io::TensorContainer c;
  for (const auto& [name, t] : weights.tensors()) c.add_f32(name, t.shape, t.data);
  io::write_container(c, path);
}

CistaWeights load_weights(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  const io::TensorContainer c = io::read_container(path);
  std::map<std::string, ParamTensor> tensors;
  for (const auto& e : c.entries) {
    require(e.dtype == io::DType::f32, ErrorKind::format,
            "weight tensor '" + e.name + "' must be float32");
    tensors[e.name] = ParamTensor{e.shape, e.f32};
  }
  return CistaWeights::from_tensors(std::move(tensors), warnings);
}

}  // namespace evrecon::sparse
