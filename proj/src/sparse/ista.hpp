#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/types.hpp"
#include "sparse/weights.hpp"

namespace evrecon::sparse {

// sign(v) * max(|v| - theta_c, 0) with one level per channel.
Tensor soft_threshold(const Tensor& v, std::span<const double> theta);

// D_X z: codes [C, h, w] to features [F, 2h, 2w].
Tensor synthesize_features(const DictionaryPair& dict, const Tensor& codes);
// D_I z: codes to a one-channel image.
Tensor synthesize_image(const DictionaryPair& dict, const Tensor& codes);
// D_X^T x: features to codes.
Tensor analyze_features(const DictionaryPair& dict, const Tensor& features);

// Largest eigenvalue of D_X^T D_X on the code grid matching an
// out_h x out_w feature map, by power iteration.
double estimate_lipschitz(const DictionaryPair& dict, int out_h, int out_w, int iterations = 50,
                          std::uint64_t seed = 0);

// 0.5 * ||x - D_X z||^2 + lambda * ||z||_1
double lasso_objective(const DictionaryPair& dict, const Tensor& x, const Tensor& z, double lambda);

struct IstaResult {
  Tensor codes;
  std::vector<double> objective;  // before the first step and after each step
};

// z <- soft(z + (1/L) D_X^T (x - D_X z), lambda / L), K times, from z0 (zero
// when absent).
IstaResult ista_solve(const Tensor& x, const DictionaryPair& dict, double lambda, double step_constant,
                      int iterations, const std::optional<Tensor>& z0 = std::nullopt,
                      bool track_objective = false);

struct BridgeOptions {
  int bins = 5;
  int lsrc_channels = 1;
  // Fusion: every feature channel receives frame_gain * I + event_gain * sum_b E_b.
  double frame_gain = 1.0;
  double event_gain = 0.1;
  // LSTC starts ISTA from the incoming (warped) codes instead of zero.
  bool warm_start = true;
};

// Weights whose unfolded blocks reproduce the ISTA recursion exactly
// (analysis (1/L) D_X^T, synthesis D_X, thresholds lambda / L), with an inert
// LSTC (zero or warm start) and an LSRC that is pure D_I synthesis.
CistaWeights init_weights_from_dict(const DictionaryPair& dict, double lambda, double step_constant,
                                    int blocks, const BridgeOptions& options = {});

// init_weights_from_dict over tent_detail_dictionary(), with the step
// constant set 1% above the power-iteration estimate on a 32 x 32 grid.
CistaWeights bridge_weights(double lambda, int blocks, const BridgeOptions& options = {});

}  // namespace evrecon::sparse
