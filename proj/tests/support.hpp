#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "core/events.hpp"
#include "core/types.hpp"

namespace evrecon::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("evrecon_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Image random_image(int w, int h, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Image img(w, h);
  for (double& v : img.pixels()) v = d(rng);
  return img;
}

inline FlowField random_flow(int w, int h, std::mt19937_64& rng, double mag) {
  std::uniform_real_distribution<float> d(static_cast<float>(-mag), static_cast<float>(mag));
  FlowField f(w, h);
  for (float& v : f.u_values()) v = d(rng);
  for (float& v : f.v_values()) v = d(rng);
  return f;
}

// Sorted random stream inside [t0, t1].
inline EventStream random_stream(int w, int h, std::size_t n, std::mt19937_64& rng, double t0 = 0.0,
                                 double t1 = 1.0) {
  EventStream s;
  s.width = w;
  s.height = h;
  s.t_start = t0;
  s.t_end = t1;
  std::uniform_int_distribution<int> dx(0, w - 1), dy(0, h - 1), dp(0, 1);
  std::uniform_real_distribution<double> dt(t0, t1);
  for (std::size_t i = 0; i < n; ++i) s.events.push_back({dx(rng), dy(rng), dt(rng), dp(rng) ? 1 : -1});
  s.sort();
  return s;
}

}  // namespace evrecon::testing
