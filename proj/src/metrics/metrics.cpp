#include "metrics/metrics.hpp"

#include <array>
#include <cmath>
#include <string>

#include "warp/warp.hpp"

namespace evrecon::metrics {
namespace {

void same_shape(const Image& a, const Image& b, const char* what) {
  require(a.same_shape(b), ErrorKind::dimension, std::string(what) + ": image shapes differ");
}

constexpr int kWindow = 11;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    g[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += g[static_cast<std::size_t>(i)];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Valid-mode separable Gaussian filter.
Image filter_valid(const Image& img) {
  static const auto g = gaussian_taps();
  const int ow = img.width() - kWindow + 1;
  const int oh = img.height() - kWindow + 1;
  Image tmp(ow, img.height());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[static_cast<std::size_t>(k)] * img(x + k, y);
      tmp(x, y) = s;
    }
  Image out(ow, oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[static_cast<std::size_t>(k)] * tmp(x, y + k);
      out(x, y) = s;
    }
  return out;
}

Image product(const Image& a, const Image& b) {
  Image out(a.width(), a.height());
  auto pa = a.pixels();
  auto pb = b.pixels();
  auto po = out.pixels();
  for (std::size_t i = 0; i < po.size(); ++i) po[i] = pa[i] * pb[i];
  return out;
}

}  // namespace

void LossConfig::validate() const {
  require(lambda_tc >= 0.0 && lambda_photo >= 0.0 && alpha_m >= 0.0 && phi > 0.0, ErrorKind::config,
          "loss weights must be nonnegative");
  require(skip_frames >= 1 && flow_iterations >= 1, ErrorKind::config, "L_0 and R must be at least 1");
}

double mse(const Image& a, const Image& b) {
  same_shape(a, b, "mse");
  require(!a.empty(), ErrorKind::dimension, "mse: empty image");
  double s = 0.0;
  auto pa = a.pixels();
  auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) s += (pa[i] - pb[i]) * (pa[i] - pb[i]);
  return s / static_cast<double>(pa.size());
}

double mean_abs_diff(const Image& a, const Image& b) {
  same_shape(a, b, "l1");
  require(!a.empty(), ErrorKind::dimension, "l1: empty image");
  double s = 0.0;
  auto pa = a.pixels();
  auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) s += std::fabs(pa[i] - pb[i]);
  return s / static_cast<double>(pa.size());
}

double ssim(const Image& a, const Image& b) {
  same_shape(a, b, "ssim");
  require(a.width() >= kWindow && a.height() >= kWindow, ErrorKind::dimension,
          "ssim: images must be at least 11x11");
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  const Image mu_a = filter_valid(a);
  const Image mu_b = filter_valid(b);
  const Image aa = filter_valid(product(a, a));
  const Image bb = filter_valid(product(b, b));
  const Image ab = filter_valid(product(a, b));
  double sum = 0.0;
  const std::size_t n = mu_a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ma = mu_a.pixels()[i];
    const double mb = mu_b.pixels()[i];
    const double va = aa.pixels()[i] - ma * ma;
    const double vb = bb.pixels()[i] - mb * mb;
    const double cov = ab.pixels()[i] - ma * mb;
    sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return sum / static_cast<double>(n);
}

Image m_weight(const Image& warped_gt, const Image& gt, double alpha_m) {
  same_shape(warped_gt, gt, "m_weight");
  Image out(gt.width(), gt.height());
  auto pw = warped_gt.pixels();
  auto pg = gt.pixels();
  auto po = out.pixels();
  for (std::size_t i = 0; i < po.size(); ++i) {
    const double d = pw[i] - pg[i];
    po[i] = std::exp(-alpha_m * d * d);
  }
  return out;
}

double temporal_consistency_loss(const Image& prev_hat, const Image& hat, const FlowField& flow,
                                 const Image& weight) {
  same_shape(prev_hat, hat, "temporal consistency");
  same_shape(hat, weight, "temporal consistency");
  const Image warped = warp::forward_warp_frame(prev_hat, flow);
  double s = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i)
    s += std::fabs(weight.pixels()[i] * (warped.pixels()[i] - hat.pixels()[i]));
  return s / static_cast<double>(hat.size());
}

double reconstruction_loss(const Image& hat, const Image& gt, const PerceptualFn& perceptual) {
  same_shape(hat, gt, "reconstruction loss");
  double loss = mean_abs_diff(hat, gt) + (1.0 - ssim(hat, gt));
  if (perceptual) loss += perceptual(hat, gt);
  return loss;
}

double sequence_reconstruction_loss(std::span<const double> rec, std::span<const double> tc,
                                    const LossConfig& cfg) {
  cfg.validate();
  require(rec.size() == tc.size(), ErrorKind::parameter, "one temporal-consistency term per frame required");
  const int len = static_cast<int>(rec.size());
  require(len >= cfg.skip_frames, ErrorKind::parameter, "sequence shorter than L_0");
  double total = 0.0;
  for (double r : rec) total += r;
  double tcs = 0.0;
  for (int t = cfg.skip_frames; t <= len; ++t) tcs += tc[static_cast<std::size_t>(t - 1)];
  return total + cfg.lambda_tc * tcs;
}

std::vector<double> iteration_weights(int iterations, double phi, bool raft_weighting) {
  require(iterations >= 1 && phi > 0.0, ErrorKind::parameter, "need R >= 1 and phi > 0");
  std::vector<double> w;
  for (int i = 1; i <= iterations; ++i)
    w.push_back(std::pow(phi, iterations - i - (raft_weighting ? 0 : 1)));
  return w;
}

FlowField flow_at_level(const FlowField& flow, int width, int height) {
  FlowField f = flow;
  while (f.width() > width || f.height() > height) f = warp::downsample_flow(f);
  require(f.width() == width && f.height() == height, ErrorKind::dimension,
          "prediction size is not a pyramid level of the GT flow");
  return f;
}

Image image_at_level(const Image& img, int width, int height) {
  Image f = img;
  while (f.width() > width || f.height() > height) f = warp::downsample_image(f);
  require(f.width() == width && f.height() == height, ErrorKind::dimension,
          "prediction size is not a pyramid level of the weight map");
  return f;
}

double flow_loss(std::span<const FlowField> predictions, const FlowField& gt, const Image& weight,
                 const LossConfig& cfg) {
  require(!predictions.empty(), ErrorKind::parameter, "flow loss needs at least one prediction");
  require(gt.same_shape(weight), ErrorKind::dimension, "weight map and GT flow sizes differ");
  const auto w = iteration_weights(static_cast<int>(predictions.size()), cfg.phi, cfg.raft_weighting);
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const FlowField& p = predictions[i];
    const FlowField g = flow_at_level(gt, p.width(), p.height());
    const Image m = image_at_level(weight, p.width(), p.height());
    double s = 0.0;
    for (int y = 0; y < p.height(); ++y)
      for (int x = 0; x < p.width(); ++x)
        s += m(x, y) * (std::fabs(static_cast<double>(p.u(x, y)) - g.u(x, y)) +
                        std::fabs(static_cast<double>(p.v(x, y)) - g.v(x, y)));
    total += w[i] * s / (2.0 * static_cast<double>(p.size()));
  }
  return total;
}

double photometric_loss(const Image& prev_gt, const Image& cur_gt, std::span<const FlowField> predictions,
                        const LossConfig& cfg) {
  same_shape(prev_gt, cur_gt, "photometric loss");
  require(!predictions.empty(), ErrorKind::parameter, "photometric loss needs at least one prediction");
  const auto w = iteration_weights(static_cast<int>(predictions.size()), cfg.phi, cfg.raft_weighting);
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const FlowField& p = predictions[i];
    const Image prev = image_at_level(prev_gt, p.width(), p.height());
    const Image cur = image_at_level(cur_gt, p.width(), p.height());
    const warp::Splat splat = warp::splat_plane(prev, p);
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      if (splat.weights.pixels()[k] <= 0.0) continue;
      s += std::fabs(std::clamp(splat.values.pixels()[k], 0.0, 1.0) - cur.pixels()[k]);
      ++n;
    }
    if (n > 0) total += w[i] * s / static_cast<double>(n);
  }
  return total;
}

double sequence_flow_loss(std::span<const double> flow_terms, std::span<const double> photo_terms,
                          const LossConfig& cfg) {
  require(flow_terms.size() == photo_terms.size(), ErrorKind::parameter, "term counts differ");
  double total = 0.0;
  for (std::size_t t = 0; t < flow_terms.size(); ++t) total += flow_terms[t] + cfg.lambda_photo * photo_terms[t];
  return total;
}

double epe(const FlowField& pred, const FlowField& gt, const Image* mask) {
  require(pred.same_shape(gt), ErrorKind::dimension, "epe: flow shapes differ");
  if (mask) require(gt.same_shape(*mask), ErrorKind::dimension, "epe: mask shape differs");
  double s = 0.0;
  std::size_t n = 0;
  for (int y = 0; y < gt.height(); ++y)
    for (int x = 0; x < gt.width(); ++x) {
      if (mask && !((*mask)(x, y) > 0.0)) continue;
      const double du = static_cast<double>(pred.u(x, y)) - gt.u(x, y);
      const double dv = static_cast<double>(pred.v(x, y)) - gt.v(x, y);
      s += std::sqrt(du * du + dv * dv);
      ++n;
    }
  require(n > 0, ErrorKind::parameter, "epe: empty mask");
  return s / static_cast<double>(n);
}

double outlier_pct(const FlowField& pred, const FlowField& gt) {
  require(pred.same_shape(gt), ErrorKind::dimension, "outlier_pct: flow shapes differ");
  require(gt.size() > 0, ErrorKind::dimension, "outlier_pct: empty flow");
  std::size_t out = 0;
  for (int y = 0; y < gt.height(); ++y)
    for (int x = 0; x < gt.width(); ++x) {
      const double du = static_cast<double>(pred.u(x, y)) - gt.u(x, y);
      const double dv = static_cast<double>(pred.v(x, y)) - gt.v(x, y);
      const double err = std::sqrt(du * du + dv * dv);
      const double mag = std::hypot(static_cast<double>(gt.u(x, y)), static_cast<double>(gt.v(x, y)));
      if (err > 3.0 && err > 0.05 * mag) ++out;
    }
  return 100.0 * static_cast<double>(out) / static_cast<double>(gt.size());
}

}  // namespace evrecon::metrics
