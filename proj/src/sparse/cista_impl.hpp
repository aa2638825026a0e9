#pragma once

// Scalar-generic forward pass. Instantiated for double in cista.cpp; tests
// instantiate it with a dual-number type for directional derivatives.

#include <cmath>
#include <string>

#include "sparse/cista.hpp"
#include "sparse/conv.hpp"

namespace evrecon::sparse {

inline double value_of(double v) { return v; }

namespace detail {

template <typename T>
void check_finite(const Tensor3<T>& t, const char* layer) {
  for (const T& v : t.values())
    require(std::isfinite(value_of(v)), ErrorKind::numeric,
            std::string("non-finite activation in layer ") + layer);
}

template <typename T>
T sigmoid(const T& x) {
  using std::exp;
  return T(1.0) / (T(1.0) + exp(-x));
}

template <typename T>
T softplus(const T& x, double beta) {
  using std::exp;
  using std::log1p;
  if (value_of(x) > 0.0) return x + log1p(exp(-beta * x)) / beta;
  return log1p(exp(beta * x)) / beta;
}

template <typename T>
T shrink(const T& v, double theta, const ForwardOptions& opt) {
  if (opt.threshold == ThresholdMode::smooth) {
    const double b = opt.smooth_sharpness;
    return softplus(v - T(theta), b) - softplus(-v - T(theta), b);
  }
  const double x = value_of(v);
  if (x > theta) return v - T(theta);
  if (x < -theta) return v + T(theta);
  return T(0.0);
}

template <typename T>
Tensor3<T> channel_slice(const Tensor3<T>& t, int first, int count) {
  Tensor3<T> out(count, t.height(), t.width());
  for (int c = 0; c < count; ++c) {
    auto src = t.plane(first + c);
    std::copy(src.begin(), src.end(), out.plane(c).begin());
  }
  return out;
}

}  // namespace detail

template <typename T>
ForwardResultT<T> cista_forward_t(const Tensor3<T>& events, const Tensor3<T>& frame_warped,
                                  const Tensor3<T>& codes_warped, const CistaStateT<T>& previous,
                                  const CistaWeights& w, const ForwardOptions& opt) {
  using std::tanh;
  const CistaArch& arch = w.arch();
  const int H = frame_warped.height();
  const int W = frame_warped.width();
  require(H % 2 == 0 && W % 2 == 0 && H > 0 && W > 0, ErrorKind::dimension,
          "frame dimensions must be even and nonempty");
  const int h = H / 2;
  const int wc = W / 2;
  require(frame_warped.channels() == 1, ErrorKind::dimension, "warped frame must have one channel");
  require(events.channels() == arch.bins && events.height() == H && events.width() == W,
          ErrorKind::dimension, "voxel grid shape does not match weights / frame");
  auto code_shaped = [&](const Tensor3<T>& t) {
    return t.channels() == arch.codes && t.height() == h && t.width() == wc;
  };
  require(code_shaped(codes_warped), ErrorKind::dimension, "codes must be C x H/2 x W/2");
  require(code_shaped(previous.c), ErrorKind::dimension, "LSTC state must be C x H/2 x W/2");
  require(previous.a.channels() == arch.lsrc_channels && previous.a.height() == H && previous.a.width() == W,
          ErrorKind::dimension, "LSRC state must be A x H x W");

  ForwardResultT<T> res;

  // Fusion of events and warped frame into the feature stack X_t.
  Tensor3<T> input(arch.bins + 1, H, W);
  for (int b = 0; b < arch.bins; ++b) {
    auto src = events.plane(b);
    std::copy(src.begin(), src.end(), input.plane(b).begin());
  }
  {
    auto src = frame_warped.plane(0);
    std::copy(src.begin(), src.end(), input.plane(arch.bins).begin());
  }
  res.features = conv2d(input, KernelView(w.at("fusion.weight")), 1);
  add_bias(res.features, w.at("fusion.bias"));
  detail::check_finite(res.features, "fusion");

  // LSTC: gates i, f, o, g from X_t (stride 2) and the incoming codes.
  Tensor3<T> gates = conv2d(res.features, KernelView(w.at("lstc.wx")), 2);
  add_into(gates, conv2d(codes_warped, KernelView(w.at("lstc.wz")), 1));
  add_bias(gates, w.at("lstc.bias"));
  const int C = arch.codes;
  Tensor3<T> c_new(C, h, wc);
  Tensor3<T> z(C, h, wc);
  const auto& skip = w.at("lstc.skip").data;
  for (int ch = 0; ch < C; ++ch) {
    auto gi = gates.plane(ch);
    auto gf = gates.plane(C + ch);
    auto go = gates.plane(2 * C + ch);
    auto gg = gates.plane(3 * C + ch);
    auto cp = previous.c.plane(ch);
    auto cn = c_new.plane(ch);
    auto zin = codes_warped.plane(ch);
    auto zo = z.plane(ch);
    const T s(static_cast<double>(skip[static_cast<std::size_t>(ch)]));
    for (std::size_t i = 0; i < cn.size(); ++i) {
      cn[i] = detail::sigmoid(gf[i]) * cp[i] + detail::sigmoid(gi[i]) * tanh(gg[i]);
      zo[i] = s * zin[i] + detail::sigmoid(go[i]) * tanh(cn[i]);
    }
  }
  detail::check_finite(z, "lstc");

  // Unfolded ISTA blocks: z <- shrink(z + A_k (X - S_k z), theta_k).
  for (int k = 0; k < arch.blocks; ++k) {
    const Tensor3<T> recon =
        conv_transpose2d(z, KernelView(w.at(ista_name(k, "synthesis"))), 2, H, W);
    const Tensor3<T> step = conv2d(subtract(res.features, recon), KernelView(w.at(ista_name(k, "analysis"))), 2);
    const auto& theta = w.at(ista_name(k, "theta")).data;
    for (int ch = 0; ch < C; ++ch) {
      auto zp = z.plane(ch);
      auto sp = step.plane(ch);
      const double th = theta[static_cast<std::size_t>(ch)];
      for (std::size_t i = 0; i < zp.size(); ++i) zp[i] = detail::shrink(zp[i] + sp[i], th, opt);
    }
    detail::check_finite(z, ("ista." + std::to_string(k)).c_str());
  }

  // LSRC: synthesis through D_I plus a gated recurrent correction.
  const int A = arch.lsrc_channels;
  Tensor3<T> u = conv_transpose2d(z, KernelView(w.at("lsrc.wz")), 2, H, W);
  add_into(u, conv2d(previous.a, KernelView(w.at("lsrc.wa")), 1));
  add_bias(u, w.at("lsrc.gate_bias"));
  Tensor3<T> a_new(A, H, W);
  for (int ch = 0; ch < A; ++ch) {
    auto ur = u.plane(ch);
    auto uh = u.plane(A + ch);
    auto ap = previous.a.plane(ch);
    auto an = a_new.plane(ch);
    for (std::size_t i = 0; i < an.size(); ++i) {
      const T r = detail::sigmoid(ur[i]);
      an[i] = (T(1.0) - r) * ap[i] + r * tanh(uh[i]);
    }
  }
  res.frame_raw = conv_transpose2d(z, KernelView(w.at("lsrc.dict")), 2, H, W);
  add_bias(res.frame_raw, w.at("lsrc.bias"));
  add_into(res.frame_raw, conv2d(a_new, KernelView(w.at("lsrc.wout")), 1));
  detail::check_finite(res.frame_raw, "lsrc");

  res.frame = res.frame_raw;
  for (T& v : res.frame.values()) {
    const double x = value_of(v);
    if (x < 0.0) v = T(0.0);
    else if (x > 1.0) v = T(1.0);
  }
  res.state.codes = std::move(z);
  res.state.a = std::move(a_new);
  res.state.c = std::move(c_new);
  return res;
}

}  // namespace evrecon::sparse
