#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace evrecon::sim {

enum class TextureKind { checker, value_noise, bars, image };

// Procedural patterns are continuous functions of layer-local coordinates.
// `scale` is the pattern period / cell size in pixels.
struct TextureSpec {
  TextureKind kind = TextureKind::value_noise;
  std::uint64_t seed = 0;
  double scale = 8.0;
  std::string path;  // kind == image
};

// Affine pose: world = center + scale * R(angle) * local.
struct Pose {
  double cx = 0.0;
  double cy = 0.0;
  double angle = 0.0;
  double scale = 1.0;
};

// Translation in px/s, rotation in rad/s, log-scale rate in 1/s.
struct AffineVelocity {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
  double scale_rate = 0.0;
};

enum class Footprint { rectangle, ellipse };

struct Layer {
  TextureSpec texture;
  Pose pose;
  AffineVelocity velocity;

  Pose pose_at(double t) const;
};

struct SceneObject {
  Layer layer;
  Footprint footprint = Footprint::rectangle;
  double half_width = 8.0;   // local units
  double half_height = 8.0;
};

struct SceneConfig {
  int width = 64;
  int height = 64;
  Layer background;
  std::vector<SceneObject> objects;
  double duration = 1.0;
  int object_count = 0;

  void validate() const;
};

// Random scene in the style of the synthetic training data: textured
// background plus `object_count` foreground objects moving with random affine
// velocities.
SceneConfig random_scene(int width, int height, double duration, int object_count,
                         std::uint64_t seed);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// A SceneConfig with its textures materialized. Immutable; safe to share.
class Scene {
 public:
  explicit Scene(SceneConfig config);
  ~Scene();
  Scene(Scene&&) noexcept;
  Scene& operator=(Scene&&) noexcept;

  const SceneConfig& config() const noexcept { return config_; }

  Image render(double t) const;

  // Index of the topmost layer covering p at time t: -1 for background,
  // otherwise the object index.
  int layer_at(Point p, double t) const;

  // Where the scene point under p at t0 is located at t1.
  Point transport(Point p, double t0, double t1) const;

  // Largest speed (px/s) of any point of any layer at time t.
  double max_point_speed(double t) const;

 private:
  struct Textures;
  SceneConfig config_;
  std::unique_ptr<Textures> textures_;
};

Image render_scene(const SceneConfig& config, double t);

// Step keeping every scene point within 1 px of motion, clamped to
// [1e-5 s, 0.1 s].
double adaptive_timestep(const SceneConfig& config, double t);
double adaptive_timestep(const Scene& scene, double t);

FlowField ground_truth_flow(const SceneConfig& config, double t0, double t1);
FlowField ground_truth_flow(const Scene& scene, double t0, double t1);

struct FrameSequence {
  std::vector<Image> frames;
  std::vector<double> times;
};

// Frames at adaptive timestamps from 0 to the scene duration inclusive.
FrameSequence render_sequence(const Scene& scene);

}  // namespace evrecon::sim
