#include "eventsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace evrecon::sim {
namespace {

constexpr double kLinLogKnee = 20.0;
constexpr double kMinThreshold = 0.01;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct PixelEvent {
  double t;
  int polarity;
};

}  // namespace

void SimParams::validate() const {
  require(threshold_mean > 0.0, ErrorKind::parameter, "threshold mean must be positive");
  require(threshold_std >= 0.0 && neg_pos_ratio_std >= 0.0, ErrorKind::parameter,
          "standard deviations must be nonnegative");
  require(cutoff_hz >= 0.0, ErrorKind::parameter, "cutoff must be nonnegative");
  require(refractory_s >= 0.0, ErrorKind::parameter, "refractory period must be nonnegative");
  require(leak_rate_hz >= 0.0 && shot_noise_hz >= 0.0, ErrorKind::parameter,
          "noise rates must be nonnegative");
}

SimParams ideal_params(double threshold, std::uint64_t seed) {
  SimParams p;
  p.threshold_mean = threshold;
  p.threshold_std = 0.0;
  p.neg_pos_ratio_mean = 1.0;
  p.neg_pos_ratio_std = 0.0;
  p.cutoff_hz = 0.0;
  p.refractory_s = 0.0;
  p.leak_rate_hz = 0.0;
  p.shot_noise_hz = 0.0;
  p.seed = seed;
  return p;
}

SimParams sample_sequence_params(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SimParams p;
  p.seed = mix(seed);
  std::uniform_int_distribution<int> level(1, 5);
  p.threshold_mean = 0.2 * level(rng);
  p.threshold_std = 0.03;
  std::bernoulli_distribution half(0.5);
  if (half(rng)) {
    p.cutoff_hz = 200.0;
  } else {
    std::normal_distribution<double> factor(1.0, 0.2);
    p.cutoff_hz = std::max(1.0, 150.0 * factor(rng));
  }
  return p;
}

double lin_log(double intensity) {
  const double v = intensity * 255.0;
  if (v >= kLinLogKnee) return std::log(v);
  return std::log(kLinLogKnee) + (v - kLinLogKnee) / kLinLogKnee;
}

double inverse_lin_log(double brightness) {
  const double knee = std::log(kLinLogKnee);
  if (brightness >= knee) return std::exp(brightness) / 255.0;
  return (kLinLogKnee + kLinLogKnee * (brightness - knee)) / 255.0;
}

PixelThresholds sample_thresholds(const SimParams& params, int width, int height) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  PixelThresholds th;
  th.positive.resize(n);
  th.negative.resize(n);
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> cp(params.threshold_mean, params.threshold_std);
  std::normal_distribution<double> ratio(params.neg_pos_ratio_mean, params.neg_pos_ratio_std);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = params.threshold_std > 0.0 ? cp(rng) : params.threshold_mean;
    const double r = params.neg_pos_ratio_std > 0.0 ? ratio(rng) : params.neg_pos_ratio_mean;
    th.positive[i] = std::max(kMinThreshold, p);
    th.negative[i] = std::max(kMinThreshold, r * th.positive[i]);
  }
  return th;
}

EventStream emit_events(std::span<const Image> frames, std::span<const double> times,
                        const SimParams& params) {
  params.validate();
  require(frames.size() >= 2, ErrorKind::parameter, "need at least two frames");
  require(frames.size() == times.size(), ErrorKind::parameter, "one timestamp per frame required");
  for (std::size_t k = 1; k < times.size(); ++k)
    require(times[k] > times[k - 1], ErrorKind::parameter, "frame timestamps must increase strictly");
  const int width = frames[0].width();
  const int height = frames[0].height();
  for (std::size_t k = 0; k < frames.size(); ++k)
    require(frames[k].width() == width && frames[k].height() == height, ErrorKind::dimension,
            "frame " + std::to_string(k) + " size differs from frame 0");

  const PixelThresholds th = sample_thresholds(params, width, height);
  const double t0 = times.front();
  const double t_last = times.back();

  EventStream out;
  out.width = width;
  out.height = height;
  out.t_start = t0;
  out.t_end = t_last;

  std::vector<PixelEvent> pixel;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t pi = static_cast<std::size_t>(y) * width + x;
      const double cpos = th.positive[pi];
      const double cneg = th.negative[pi];
      const double drift = params.leak_rate_hz * cpos;
      pixel.clear();

      double filtered = lin_log(frames[0](x, y));
      double ref = filtered;
      double a = filtered;
      for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
        const double dt = times[k + 1] - times[k];
        const double target = lin_log(frames[k + 1](x, y));
        const double alpha = params.cutoff_hz > 0.0
                                 ? 1.0 - std::exp(-2.0 * std::numbers::pi * params.cutoff_hz * dt)
                                 : 1.0;
        filtered += alpha * (target - filtered);
        const double b = filtered - drift * (times[k + 1] - t0);
        if (b > a) {
          while (ref + cpos <= b) {
            ref += cpos;
            pixel.push_back({times[k] + (ref - a) / (b - a) * dt, 1});
          }
        } else if (b < a) {
          while (ref - cneg >= b) {
            ref -= cneg;
            pixel.push_back({times[k] + (ref - a) / (b - a) * dt, -1});
          }
        }
        a = b;
      }

      if (params.shot_noise_hz > 0.0) {
        std::mt19937_64 rng(mix(params.seed ^ mix(pi + 1)));
        std::exponential_distribution<double> gap(params.shot_noise_hz);
        std::bernoulli_distribution positive(0.5);
        for (double t = t0 + gap(rng); t <= t_last; t += gap(rng))
          pixel.push_back({t, positive(rng) ? 1 : -1});
        std::stable_sort(pixel.begin(), pixel.end(),
                         [](const PixelEvent& l, const PixelEvent& r) { return l.t < r.t; });
      }

      bool any = false;
      double last = 0.0;
      for (const auto& e : pixel) {
        if (any && e.t - last < params.refractory_s) continue;
        any = true;
        last = e.t;
        out.events.push_back({x, y, std::clamp(e.t, t0, t_last), e.polarity});
      }
    }
  }
  out.sort();
  return out;
}

}  // namespace evrecon::sim
