#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace evrecon::metrics {

struct LossConfig {
  double lambda_tc = 5.0;
  int skip_frames = 3;  // L_0
  double lambda_photo = 1.0;
  double phi = 0.8;
  double alpha_m = 50.0;
  int flow_iterations = 12;  // R
  // false: w_i = phi^(R - i - 1) as printed; true: the RAFT-style phi^(R - i).
  bool raft_weighting = false;

  void validate() const;
};

double mse(const Image& a, const Image& b);

// Gaussian-window SSIM (11x11, sigma 1.5, C1 = 0.01^2, C2 = 0.03^2, dynamic
// range 1), averaged over the valid window positions.
double ssim(const Image& a, const Image& b);

double mean_abs_diff(const Image& a, const Image& b);

// exp(-alpha |warped - target|^2) per pixel.
Image m_weight(const Image& warped_gt, const Image& gt, double alpha_m);

// mean |M * (W_f(prev_hat, flow) - hat)|
double temporal_consistency_loss(const Image& prev_hat, const Image& hat, const FlowField& flow,
                                 const Image& weight);

using PerceptualFn = std::function<double(const Image&, const Image&)>;

// mean L1 + (1 - SSIM) + perceptual; the perceptual term is zero when no
// callback is supplied.
double reconstruction_loss(const Image& hat, const Image& gt, const PerceptualFn& perceptual = {});

// sum_t rec_t + lambda_tc * sum_{t >= L_0} tc_t, with t counted from 1.
double sequence_reconstruction_loss(std::span<const double> rec, std::span<const double> tc,
                                    const LossConfig& cfg);

std::vector<double> iteration_weights(int iterations, double phi, bool raft_weighting = false);

// Repeated 2x downsampling of the GT flow / weight map until it reaches the
// requested size.
FlowField flow_at_level(const FlowField& flow, int width, int height);
Image image_at_level(const Image& img, int width, int height);

// sum_i w_i * mean |M_i * (pred_i - gt_i)| over both flow components.
double flow_loss(std::span<const FlowField> predictions, const FlowField& gt, const Image& weight,
                 const LossConfig& cfg);

// sum_i w_i * mean |W_f(prev_i, pred_i) - cur_i| over non-hole pixels.
double photometric_loss(const Image& prev_gt, const Image& cur_gt, std::span<const FlowField> predictions,
                        const LossConfig& cfg);

// sum_t (L_f^t + lambda_p * L_photo^t)
double sequence_flow_loss(std::span<const double> flow_terms, std::span<const double> photo_terms,
                          const LossConfig& cfg);

// Mean endpoint error over the pixels where mask > 0 (all pixels if no mask).
double epe(const FlowField& pred, const FlowField& gt, const Image* mask = nullptr);

// Percentage of pixels with EPE > 3 px and EPE > 5% of the GT magnitude.
double outlier_pct(const FlowField& pred, const FlowField& gt);

}  // namespace evrecon::metrics
