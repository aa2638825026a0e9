#include "warp/warp.hpp"

#include <algorithm>
#include <cmath>

namespace evrecon::warp {
namespace {

void require_match(const Image& img, const FlowField& flow, const char* what) {
  require(flow.same_shape(img), ErrorKind::dimension,
          std::string(what) + ": flow and input dimensions differ");
}

// Calls fn(target_index, weight) for the in-bounds bilinear neighbours of (px, py).
template <typename Fn>
void for_each_neighbour(double px, double py, int width, int height, Fn&& fn) {
  if (!std::isfinite(px) || !std::isfinite(py)) return;
  const double fx0 = std::floor(px);
  const double fy0 = std::floor(py);
  const double fx = px - fx0;
  const double fy = py - fy0;
  if (fx0 < -1.0 || fy0 < -1.0 || fx0 >= width || fy0 >= height) return;
  const int x0 = static_cast<int>(fx0);
  const int y0 = static_cast<int>(fy0);
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  for (int k = 0; k < 4; ++k) {
    if (w[k] == 0.0) continue;
    if (xs[k] < 0 || ys[k] < 0 || xs[k] >= width || ys[k] >= height) continue;
    fn(static_cast<std::size_t>(ys[k]) * width + xs[k], w[k]);
  }
}

Image splat_weights(const FlowField& flow) {
  Image weights(flow.width(), flow.height());
  auto acc = weights.pixels();
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < flow.width(); ++x)
      for_each_neighbour(x + static_cast<double>(flow.u(x, y)), y + static_cast<double>(flow.v(x, y)), flow.width(), flow.height(),
                         [&](std::size_t i, double w) { acc[i] += w; });
  return weights;
}

std::vector<double> splat_values(std::span<const double> source, const FlowField& flow,
                                 const Image& weights) {
  std::vector<double> acc(source.size(), 0.0);
  const int width = flow.width();
  for (int y = 0; y < flow.height(); ++y)
    for (int x = 0; x < width; ++x) {
      const double v = source[static_cast<std::size_t>(y) * width + x];
      for_each_neighbour(x + static_cast<double>(flow.u(x, y)), y + static_cast<double>(flow.v(x, y)), width, flow.height(),
                         [&](std::size_t i, double w) { acc[i] += w * v; });
    }
  auto wts = weights.pixels();
  for (std::size_t i = 0; i < acc.size(); ++i)
    acc[i] = wts[i] > 0.0 ? acc[i] / wts[i] : source[i];
  return acc;
}

}  // namespace

Splat splat_plane(const Image& source, const FlowField& flow) {
  require_match(source, flow, "forward warp");
  Splat out{Image(source.width(), source.height()), splat_weights(flow)};
  auto vals = splat_values(source.pixels(), flow, out.weights);
  std::copy(vals.begin(), vals.end(), out.values.pixels().begin());
  return out;
}

Image forward_warp_frame(const Image& frame, const FlowField& flow) {
  Image out = splat_plane(frame, flow).values;
  for (double& v : out.pixels()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

Tensor forward_warp_codes(const Tensor& codes, const FlowField& flow) {
  require(flow.width() == codes.width() && flow.height() == codes.height(), ErrorKind::dimension,
          "code warp: flow and code dimensions differ");
  const Image weights = splat_weights(flow);
  Tensor out(codes.channels(), codes.height(), codes.width());
  for (int c = 0; c < codes.channels(); ++c) {
    auto vals = splat_values(codes.plane(c), flow, weights);
    std::copy(vals.begin(), vals.end(), out.plane(c).begin());
  }
  return out;
}

namespace {

template <typename Get>
double block_mean(Get&& get, int x, int y, int width, int height) {
  const int x1 = std::min(x + 1, width - 1);
  const int y1 = std::min(y + 1, height - 1);
  return 0.25 * (get(x, y) + get(x1, y) + get(x, y1) + get(x1, y1));
}

}  // namespace

FlowField downsample_flow(const FlowField& flow) {
  const int w = (flow.width() + 1) / 2;
  const int h = (flow.height() + 1) / 2;
  FlowField out(w, h);
  auto gu = [&](int x, int y) { return static_cast<double>(flow.u(x, y)); };
  auto gv = [&](int x, int y) { return static_cast<double>(flow.v(x, y)); };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      out.u(x, y) = static_cast<float>(0.5 * block_mean(gu, 2 * x, 2 * y, flow.width(), flow.height()));
      out.v(x, y) = static_cast<float>(0.5 * block_mean(gv, 2 * x, 2 * y, flow.width(), flow.height()));
    }
  return out;
}

Image downsample_image(const Image& img) {
  const int w = (img.width() + 1) / 2;
  const int h = (img.height() + 1) / 2;
  Image out(w, h);
  auto g = [&](int x, int y) { return img(x, y); };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(x, y) = block_mean(g, 2 * x, 2 * y, img.width(), img.height());
  return out;
}

Image warp_events(const EventStream& events, const FlowField& flow, double t_ref) {
  require(flow.width() == events.width && flow.height() == events.height, ErrorKind::dimension,
          "event warp: flow does not cover the sensor");
  const double span = events.t_end - events.t_start;
  require(span > 0.0, ErrorKind::parameter, "event warp: empty stream window");
  const double rate = 1.0 / span;
  Image out(events.width, events.height);
  auto acc = out.pixels();
  for (const auto& e : events.events) {
    const double k = (t_ref - e.t) * rate;
    const double px = e.x + k * flow.u(e.x, e.y);
    const double py = e.y + k * flow.v(e.x, e.y);
    for_each_neighbour(px, py, events.width, events.height,
                       [&](std::size_t i, double w) { acc[i] += w * e.polarity; });
  }
  return out;
}

double image_variance(const Image& img) {
  require(!img.empty(), ErrorKind::parameter, "variance of an empty image");
  double mean = 0.0;
  for (double v : img.pixels()) mean += v;
  mean /= static_cast<double>(img.size());
  double var = 0.0;
  for (double v : img.pixels()) var += (v - mean) * (v - mean);
  return var / static_cast<double>(img.size());
}

double fwl(const EventStream& events, const FlowField& flow, double t_ref) {
  const double base = image_variance(warp_events(events, FlowField(flow.width(), flow.height()), t_ref));
  require(base > 0.0, ErrorKind::numeric, "FWL undefined: unwarped event image has zero variance");
  return image_variance(warp_events(events, flow, t_ref)) / base;
}

}  // namespace evrecon::warp
