#include "core/types.hpp"

#include <algorithm>
#include <cmath>

namespace evrecon {

Image channel_image(const Tensor& t, int c) {
  Image img(t.width(), t.height());
  auto src = t.plane(c);
  std::copy(src.begin(), src.end(), img.pixels().begin());
  return img;
}

Tensor stack_image(const Image& img) {
  Tensor t(1, img.height(), img.width());
  std::copy(img.pixels().begin(), img.pixels().end(), t.values().begin());
  return t;
}

FlowField FlowField::scaled(double s) const {
  FlowField out(width_, height_);
  for (std::size_t i = 0; i < u_.size(); ++i) {
    out.u_[i] = static_cast<float>(u_[i] * s);
    out.v_[i] = static_cast<float>(v_[i] * s);
  }
  return out;
}

bool FlowField::is_sane() const noexcept {
  const float bound = static_cast<float>(std::max(width_, height_));
  auto ok = [bound](float f) { return std::isfinite(f) && std::fabs(f) <= bound; };
  return std::all_of(u_.begin(), u_.end(), ok) && std::all_of(v_.begin(), v_.end(), ok);
}

}  // namespace evrecon
