#pragma once

#include <span>

#include "core/types.hpp"
#include "sparse/weights.hpp"

namespace evrecon::sparse {

// Same-padded correlation: out[a](i, j) = sum_b,ky,kx W[a][b][ky][kx] *
// x[b](s*i + ky - p, s*j + kx - p), p = k / 2, output size ceil(H / s).
template <typename T>
Tensor3<T> conv2d(const Tensor3<T>& x, const KernelView& w, int stride) {
  require(w.b == x.channels(), ErrorKind::dimension, "conv2d: input channel mismatch");
  const int oh = (x.height() + stride - 1) / stride;
  const int ow = (x.width() + stride - 1) / stride;
  const int pad = w.k / 2;
  Tensor3<T> out(w.a, oh, ow);
  for (int a = 0; a < w.a; ++a)
    for (int b = 0; b < w.b; ++b)
      for (int ky = 0; ky < w.k; ++ky)
        for (int kx = 0; kx < w.k; ++kx) {
          const float wv = w(a, b, ky, kx);
          if (wv == 0.0f) continue;
          const T weight(static_cast<double>(wv));
          for (int i = 0; i < oh; ++i) {
            const int y = stride * i + ky - pad;
            if (y < 0 || y >= x.height()) continue;
            for (int j = 0; j < ow; ++j) {
              const int xx = stride * j + kx - pad;
              if (xx < 0 || xx >= x.width()) continue;
              out(a, i, j) += weight * x(b, y, xx);
            }
          }
        }
  return out;
}

// Adjoint of conv2d with the same filter bank: maps A channels on the coarse
// grid to B channels on an out_h x out_w grid.
template <typename T>
Tensor3<T> conv_transpose2d(const Tensor3<T>& z, const KernelView& w, int stride, int out_h, int out_w) {
  require(w.a == z.channels(), ErrorKind::dimension, "conv_transpose2d: input channel mismatch");
  require((out_h + stride - 1) / stride == z.height() && (out_w + stride - 1) / stride == z.width(),
          ErrorKind::dimension, "conv_transpose2d: output size inconsistent with input grid");
  const int pad = w.k / 2;
  Tensor3<T> out(w.b, out_h, out_w);
  for (int a = 0; a < w.a; ++a)
    for (int b = 0; b < w.b; ++b)
      for (int ky = 0; ky < w.k; ++ky)
        for (int kx = 0; kx < w.k; ++kx) {
          const float wv = w(a, b, ky, kx);
          if (wv == 0.0f) continue;
          const T weight(static_cast<double>(wv));
          for (int i = 0; i < z.height(); ++i) {
            const int y = stride * i + ky - pad;
            if (y < 0 || y >= out_h) continue;
            for (int j = 0; j < z.width(); ++j) {
              const int xx = stride * j + kx - pad;
              if (xx < 0 || xx >= out_w) continue;
              out(b, y, xx) += weight * z(a, i, j);
            }
          }
        }
  return out;
}

template <typename T>
void add_bias(Tensor3<T>& x, const ParamTensor& bias) {
  require(static_cast<int>(bias.data.size()) == x.channels(), ErrorKind::dimension, "bias size mismatch");
  for (int c = 0; c < x.channels(); ++c) {
    const T b(static_cast<double>(bias.data[static_cast<std::size_t>(c)]));
    for (T& v : x.plane(c)) v += b;
  }
}

template <typename T>
void add_into(Tensor3<T>& acc, const Tensor3<T>& x) {
  require(acc.same_shape(x), ErrorKind::dimension, "tensor shape mismatch");
  for (std::size_t i = 0; i < acc.size(); ++i) acc.values()[i] += x.values()[i];
}

template <typename T>
Tensor3<T> subtract(const Tensor3<T>& a, const Tensor3<T>& b) {
  require(a.same_shape(b), ErrorKind::dimension, "tensor shape mismatch");
  Tensor3<T> out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] -= b.values()[i];
  return out;
}

}  // namespace evrecon::sparse
