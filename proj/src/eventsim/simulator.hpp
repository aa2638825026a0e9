#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/events.hpp"
#include "core/types.hpp"

namespace evrecon::sim {

struct SimParams {
  double threshold_mean = 0.2;     // log-intensity units
  double threshold_std = 0.03;
  double neg_pos_ratio_mean = 1.0;  // C_n = lambda * C_p
  double neg_pos_ratio_std = 0.1;
  double cutoff_hz = 200.0;        // 0 disables the lowpass
  double refractory_s = 1e-3;
  double leak_rate_hz = 0.1;
  double shot_noise_hz = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Noise-free, lowpass-free, refractory-free parameters with a fixed threshold.
SimParams ideal_params(double threshold, std::uint64_t seed = 0);

// Draws one sequence's parameters the way the synthetic training set does:
// mean threshold picked uniformly from {0.2, 0.4, 0.6, 0.8, 1.0}, sigma 0.03,
// cutoff 200 Hz for half of the draws and 150 * N(1, 0.2) Hz otherwise.
SimParams sample_sequence_params(std::uint64_t seed);

// Lin-log brightness: ln(255 I) above 255 I = 20, linear below with the slope
// matched at the junction.
double lin_log(double intensity);
double inverse_lin_log(double brightness);

struct PixelThresholds {
  std::vector<double> positive;
  std::vector<double> negative;
};

// Per-pixel C_p ~ N(mu, sigma) and C_n = lambda * C_p, both clamped to >= 0.01.
PixelThresholds sample_thresholds(const SimParams& params, int width, int height);

EventStream emit_events(std::span<const Image> frames, std::span<const double> times,
                        const SimParams& params);

}  // namespace evrecon::sim
