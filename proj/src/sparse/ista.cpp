#include "sparse/ista.hpp"

#include <cmath>
#include <random>
#include <string>

#include "sparse/conv.hpp"

namespace evrecon::sparse {

Tensor soft_threshold(const Tensor& v, std::span<const double> theta) {
  require(static_cast<int>(theta.size()) == v.channels(), ErrorKind::dimension,
          "one threshold per channel required");
  Tensor out(v.channels(), v.height(), v.width());
  for (int c = 0; c < v.channels(); ++c) {
    const double th = theta[static_cast<std::size_t>(c)];
    require(th >= 0.0, ErrorKind::parameter, "soft threshold level must be nonnegative");
    auto src = v.plane(c);
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double a = src[i];
      dst[i] = a > th ? a - th : (a < -th ? a + th : 0.0);
    }
  }
  return out;
}

Tensor synthesize_features(const DictionaryPair& dict, const Tensor& codes) {
  return conv_transpose2d(codes, KernelView(dict.analysis), 2, 2 * codes.height(), 2 * codes.width());
}

Tensor synthesize_image(const DictionaryPair& dict, const Tensor& codes) {
  return conv_transpose2d(codes, KernelView(dict.synthesis), 2, 2 * codes.height(), 2 * codes.width());
}

Tensor analyze_features(const DictionaryPair& dict, const Tensor& features) {
  return conv2d(features, KernelView(dict.analysis), 2);
}

double estimate_lipschitz(const DictionaryPair& dict, int out_h, int out_w, int iterations,
                          std::uint64_t seed) {
  dict.validate();
  require(out_h > 0 && out_w > 0 && out_h % 2 == 0 && out_w % 2 == 0, ErrorKind::dimension,
          "power iteration needs an even, nonempty feature grid");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Tensor v(dict.codes(), out_h / 2, out_w / 2);
  for (double& x : v.values()) x = n(rng);
  double eig = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double norm = 0.0;
    for (double x : v.values()) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    for (double& x : v.values()) x /= norm;
    Tensor g = conv2d(conv_transpose2d(v, KernelView(dict.analysis), 2, out_h, out_w),
                      KernelView(dict.analysis), 2);
    eig = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) eig += g.values()[i] * v.values()[i];
    v = std::move(g);
  }
  return eig;
}

double lasso_objective(const DictionaryPair& dict, const Tensor& x, const Tensor& z, double lambda) {
  const Tensor r = subtract(x, synthesize_features(dict, z));
  double fit = 0.0;
  for (double v : r.values()) fit += v * v;
  double l1 = 0.0;
  for (double v : z.values()) l1 += std::fabs(v);
  return 0.5 * fit + lambda * l1;
}

IstaResult ista_solve(const Tensor& x, const DictionaryPair& dict, double lambda, double step_constant,
                      int iterations, const std::optional<Tensor>& z0, bool track_objective) {
  dict.validate();
  require(step_constant > 0.0, ErrorKind::parameter, "ISTA step constant L must be positive");
  require(lambda >= 0.0, ErrorKind::parameter, "sparsity weight must be nonnegative");
  require(iterations >= 0, ErrorKind::parameter, "iteration count must be nonnegative");
  require(x.channels() == dict.features(), ErrorKind::dimension, "feature channels differ from dictionary");
  require(x.height() % 2 == 0 && x.width() % 2 == 0, ErrorKind::dimension, "feature grid must be even");

  const int h = x.height() / 2;
  const int w = x.width() / 2;
  IstaResult res{z0 ? *z0 : Tensor(dict.codes(), h, w), {}};
  require(res.codes.channels() == dict.codes() && res.codes.height() == h && res.codes.width() == w,
          ErrorKind::dimension, "initial codes have the wrong shape");
  const KernelView d(dict.analysis);
  const std::vector<double> theta(static_cast<std::size_t>(dict.codes()), lambda / step_constant);
  const double inv = 1.0 / step_constant;
  if (track_objective) res.objective.push_back(lasso_objective(dict, x, res.codes, lambda));

  for (int k = 0; k < iterations; ++k) {
    const Tensor residual = subtract(x, conv_transpose2d(res.codes, d, 2, x.height(), x.width()));
    Tensor grad = conv2d(residual, d, 2);
    Tensor next = res.codes;
    for (std::size_t i = 0; i < next.size(); ++i) next.values()[i] += inv * grad.values()[i];
    res.codes = soft_threshold(next, theta);
    for (double v : res.codes.values())
      require(std::isfinite(v), ErrorKind::numeric, "ISTA diverged at iteration " + std::to_string(k + 1));
    if (track_objective) res.objective.push_back(lasso_objective(dict, x, res.codes, lambda));
  }
  return res;
}

CistaWeights init_weights_from_dict(const DictionaryPair& dict, double lambda, double step_constant,
                                    int blocks, const BridgeOptions& options) {
  dict.validate();
  require(step_constant > 0.0, ErrorKind::parameter, "ISTA step constant L must be positive");
  require(lambda >= 0.0, ErrorKind::parameter, "sparsity weight must be nonnegative");

  CistaArch arch;
  arch.bins = options.bins;
  arch.features = dict.features();
  arch.codes = dict.codes();
  arch.kernel = dict.kernel();
  arch.blocks = blocks;
  arch.lsrc_channels = options.lsrc_channels;
  CistaWeights w(arch);

  const int k = arch.kernel;
  const int centre = k / 2;
  auto& fusion = w.at("fusion.weight");
  for (int f = 0; f < arch.features; ++f)
    for (int b = 0; b <= arch.bins; ++b) {
      const double gain = b == arch.bins ? options.frame_gain : options.event_gain;
      fusion.data[((static_cast<std::size_t>(f) * (arch.bins + 1) + b) * k + centre) * k + centre] =
          static_cast<float>(gain);
    }

  for (float& s : w.at("lstc.skip").data) s = options.warm_start ? 1.0f : 0.0f;

  const double inv = 1.0 / step_constant;
  for (int i = 0; i < blocks; ++i) {
    auto& analysis = w.at(ista_name(i, "analysis"));
    for (std::size_t j = 0; j < analysis.data.size(); ++j)
      analysis.data[j] = static_cast<float>(inv * dict.analysis.data[j]);
    w.at(ista_name(i, "synthesis")).data = dict.analysis.data;
    for (float& th : w.at(ista_name(i, "theta")).data) th = static_cast<float>(lambda * inv);
  }
  w.at("lsrc.dict").data = dict.synthesis.data;
  w.validate();
  return w;
}

CistaWeights bridge_weights(double lambda, int blocks, const BridgeOptions& options) {
  const DictionaryPair dict = tent_detail_dictionary();
  const double step = 1.01 * estimate_lipschitz(dict, 32, 32);
  return init_weights_from_dict(dict, lambda, step, blocks, options);
}

}  // namespace evrecon::sparse
