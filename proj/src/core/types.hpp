#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace evrecon {

// Row-major H x W plane of doubles. Used for intensity frames (values in
// [0,1]), signed event images and per-pixel weight maps.
class Image {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0)
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked_area(width, height)), fill) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(int x, int y) { return data_[index(x, y)]; }
  double operator()(int x, int y) const { return data_[index(x, y)]; }

  std::span<double> pixels() noexcept { return data_; }
  std::span<const double> pixels() const noexcept { return data_; }

  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Image&) const = default;

 private:
  static long checked_area(int w, int h) {
    require(w >= 0 && h >= 0, ErrorKind::dimension, "negative image size");
    return static_cast<long>(w) * h;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Channel-major C x H x W tensor.
template <typename T>
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int channels, int height, int width, T fill = T{})
      : c_(channels), h_(height), w_(width),
        data_(static_cast<std::size_t>(channels) * height * width, fill) {}

  int channels() const noexcept { return c_; }
  int height() const noexcept { return h_; }
  int width() const noexcept { return w_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::size_t plane_size() const noexcept {
    return static_cast<std::size_t>(h_) * w_;
  }

  T& operator()(int c, int y, int x) { return data_[index(c, y, x)]; }
  const T& operator()(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<T> plane(int c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const T> plane(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }

  std::vector<T>& values() noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  bool same_shape(const Tensor3& o) const noexcept {
    return c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }

  bool operator==(const Tensor3&) const = default;

 private:
  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * h_ + y) * w_ + x;
  }

  int c_ = 0;
  int h_ = 0;
  int w_ = 0;
  std::vector<T> data_;
};

using Tensor = Tensor3<double>;

Image channel_image(const Tensor& t, int c);
Tensor stack_image(const Image& img);

// Per-pixel displacement in pixels, forward in time. Stored in single
// precision so that .flo files round-trip exactly.
class FlowField {
 public:
  FlowField() = default;
  FlowField(int width, int height, float u = 0.0f, float v = 0.0f)
      : width_(width), height_(height),
        u_(static_cast<std::size_t>(width) * height, u),
        v_(static_cast<std::size_t>(width) * height, v) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return u_.size(); }

  float& u(int x, int y) { return u_[idx(x, y)]; }
  float& v(int x, int y) { return v_[idx(x, y)]; }
  float u(int x, int y) const { return u_[idx(x, y)]; }
  float v(int x, int y) const { return v_[idx(x, y)]; }

  std::span<float> u_values() noexcept { return u_; }
  std::span<float> v_values() noexcept { return v_; }
  std::span<const float> u_values() const noexcept { return u_; }
  std::span<const float> v_values() const noexcept { return v_; }

  bool same_shape(const FlowField& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_;
  }
  bool same_shape(const Image& img) const noexcept {
    return width_ == img.width() && height_ == img.height();
  }

  FlowField scaled(double s) const;

  // Finite entries with |u|,|v| <= max(H, W).
  bool is_sane() const noexcept;

  bool operator==(const FlowField&) const = default;

 private:
  std::size_t idx(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> u_;
  std::vector<float> v_;
};

}  // namespace evrecon
