#include "eventsim/scene.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "io/image_io.hpp"

namespace evrecon::sim {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double lattice(std::uint64_t seed, long ix, long iy) {
  std::uint64_t h = splitmix(seed ^ splitmix(static_cast<std::uint64_t>(ix) * 0x632be59bd9b4e019ULL ^
                                             static_cast<std::uint64_t>(iy)));
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

double smooth(double f) { return f * f * (3.0 - 2.0 * f); }

double value_noise(std::uint64_t seed, double u, double v, double cell) {
  double sum = 0.0;
  double amp = 1.0;
  double norm = 0.0;
  for (int octave = 0; octave < 3; ++octave) {
    const double su = u / cell;
    const double sv = v / cell;
    const double fu = std::floor(su);
    const double fv = std::floor(sv);
    const long iu = static_cast<long>(fu);
    const long iv = static_cast<long>(fv);
    const double tu = smooth(su - fu);
    const double tv = smooth(sv - fv);
    const std::uint64_t s = seed + 0x51ed27ULL * static_cast<std::uint64_t>(octave);
    const double a = lattice(s, iu, iv);
    const double b = lattice(s, iu + 1, iv);
    const double c = lattice(s, iu, iv + 1);
    const double d = lattice(s, iu + 1, iv + 1);
    sum += amp * ((a * (1 - tu) + b * tu) * (1 - tv) + (c * (1 - tu) + d * tu) * tv);
    norm += amp;
    amp *= 0.5;
    cell *= 0.5;
  }
  return 0.1 + 0.8 * (sum / norm);
}

double wrap(double v, int period) {
  double r = std::fmod(v, static_cast<double>(period));
  return r < 0 ? r + period : r;
}

Point to_local(const Pose& p, Point w) {
  const double dx = w.x - p.cx;
  const double dy = w.y - p.cy;
  const double c = std::cos(p.angle);
  const double s = std::sin(p.angle);
  return {(c * dx + s * dy) / p.scale, (-s * dx + c * dy) / p.scale};
}

Point to_world(const Pose& p, Point q) {
  const double c = std::cos(p.angle);
  const double s = std::sin(p.angle);
  return {p.cx + p.scale * (c * q.x - s * q.y), p.cy + p.scale * (s * q.x + c * q.y)};
}

bool inside(const SceneObject& obj, Point q) {
  if (obj.footprint == Footprint::rectangle)
    return std::fabs(q.x) <= obj.half_width && std::fabs(q.y) <= obj.half_height;
  const double a = q.x / obj.half_width;
  const double b = q.y / obj.half_height;
  return a * a + b * b <= 1.0;
}

double point_speed(const Layer& layer, const Pose& pose, Point p) {
  const double rx = p.x - pose.cx;
  const double ry = p.y - pose.cy;
  const auto& v = layer.velocity;
  const double vx = v.vx + v.scale_rate * rx - v.omega * ry;
  const double vy = v.vy + v.scale_rate * ry + v.omega * rx;
  return std::hypot(vx, vy);
}

}  // namespace

Pose Layer::pose_at(double t) const {
  return {pose.cx + velocity.vx * t, pose.cy + velocity.vy * t, pose.angle + velocity.omega * t,
          pose.scale * std::exp(velocity.scale_rate * t)};
}

void SceneConfig::validate() const {
  require(width >= 16 && height >= 16, ErrorKind::config, "scene must be at least 16x16 pixels");
  require(duration > 0.0, ErrorKind::config, "scene duration must be positive");
  require(object_count >= 0 && object_count <= 10, ErrorKind::config,
          "object_count must lie in [0, 10]");
  require(static_cast<std::size_t>(object_count) == objects.size(), ErrorKind::config,
          "object_count does not match the number of objects");
  auto check_layer = [](const Layer& l) {
    require(l.pose.scale > 0.0, ErrorKind::config, "layer scale must be positive");
    require(l.texture.kind == TextureKind::image || l.texture.scale > 0.0, ErrorKind::config,
            "texture scale must be positive");
  };
  check_layer(background);
  for (const auto& o : objects) {
    check_layer(o.layer);
    require(o.half_width > 0.0 && o.half_height > 0.0, ErrorKind::config,
            "object footprint must be nonempty");
  }
}

SceneConfig random_scene(int width, int height, double duration, int object_count,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto texture = [&]() {
    TextureSpec t;
    const int pick = static_cast<int>(unit(rng) * 3.0);
    t.kind = pick == 0 ? TextureKind::checker : pick == 1 ? TextureKind::value_noise : TextureKind::bars;
    t.seed = rng();
    t.scale = uniform(4.0, 12.0);
    return t;
  };

  SceneConfig cfg;
  cfg.width = width;
  cfg.height = height;
  cfg.duration = duration;
  cfg.background.texture = texture();
  cfg.background.pose = {width / 2.0, height / 2.0, 0.0, 1.0};
  cfg.background.velocity = {uniform(-20.0, 20.0), uniform(-20.0, 20.0), uniform(-0.1, 0.1),
                             uniform(-0.05, 0.05)};
  cfg.object_count = object_count;
  const double max_half = std::max(4.0, std::min(width, height) / 6.0);
  for (int i = 0; i < object_count; ++i) {
    SceneObject obj;
    obj.layer.texture = texture();
    obj.layer.pose = {uniform(0.0, width), uniform(0.0, height), uniform(0.0, std::numbers::pi), 1.0};
    obj.layer.velocity = {uniform(-40.0, 40.0), uniform(-40.0, 40.0), uniform(-0.5, 0.5),
                          uniform(-0.1, 0.1)};
    obj.footprint = unit(rng) < 0.5 ? Footprint::rectangle : Footprint::ellipse;
    obj.half_width = uniform(3.0, max_half);
    obj.half_height = uniform(3.0, max_half);
    cfg.objects.push_back(obj);
  }
  return cfg;
}

struct Scene::Textures {
  // Loaded images, index-aligned with layers (0 = background). Empty for
  // procedural textures.
  std::vector<Image> images;
};

Scene::Scene(SceneConfig config) : config_(std::move(config)), textures_(std::make_unique<Textures>()) {
  config_.validate();
  auto load = [](const TextureSpec& t) {
    return t.kind == TextureKind::image ? io::read_image(t.path) : Image{};
  };
  textures_->images.push_back(load(config_.background.texture));
  for (const auto& o : config_.objects) textures_->images.push_back(load(o.layer.texture));
}

Scene::~Scene() = default;
Scene::Scene(Scene&&) noexcept = default;
Scene& Scene::operator=(Scene&&) noexcept = default;

namespace {

double sample_texture(const TextureSpec& t, const Image& img, Point q) {
  switch (t.kind) {
    case TextureKind::checker: {
      const long a = static_cast<long>(std::floor(q.x / t.scale));
      const long b = static_cast<long>(std::floor(q.y / t.scale));
      return ((a + b) & 1L) ? 0.8 : 0.2;
    }
    case TextureKind::value_noise:
      return value_noise(t.seed, q.x, q.y, t.scale);
    case TextureKind::bars: {
      const double angle = static_cast<double>(t.seed % 360) * std::numbers::pi / 180.0;
      const double d = q.x * std::cos(angle) + q.y * std::sin(angle);
      return 0.5 + 0.4 * std::sin(2.0 * std::numbers::pi * d / t.scale);
    }
    case TextureKind::image: {
      const double x = wrap(q.x, img.width());
      const double y = wrap(q.y, img.height());
      const int x0 = static_cast<int>(x);
      const int y0 = static_cast<int>(y);
      const int x1 = (x0 + 1) % img.width();
      const int y1 = (y0 + 1) % img.height();
      const double fx = x - x0;
      const double fy = y - y0;
      return (img(x0, y0) * (1 - fx) + img(x1, y0) * fx) * (1 - fy) +
             (img(x0, y1) * (1 - fx) + img(x1, y1) * fx) * fy;
    }
  }
  return 0.0;
}

}  // namespace

int Scene::layer_at(Point p, double t) const {
  for (int i = static_cast<int>(config_.objects.size()) - 1; i >= 0; --i) {
    const auto& obj = config_.objects[static_cast<std::size_t>(i)];
    if (inside(obj, to_local(obj.layer.pose_at(t), p))) return i;
  }
  return -1;
}

Image Scene::render(double t) const {
  Image out(config_.width, config_.height);
  const Pose bg = config_.background.pose_at(t);
  std::vector<Pose> poses;
  for (const auto& o : config_.objects) poses.push_back(o.layer.pose_at(t));

  for (int y = 0; y < config_.height; ++y) {
    for (int x = 0; x < config_.width; ++x) {
      const Point p{static_cast<double>(x), static_cast<double>(y)};
      double value = -1.0;
      for (int i = static_cast<int>(poses.size()) - 1; i >= 0 && value < 0.0; --i) {
        const auto& obj = config_.objects[static_cast<std::size_t>(i)];
        const Point q = to_local(poses[static_cast<std::size_t>(i)], p);
        if (inside(obj, q))
          value = sample_texture(obj.layer.texture, textures_->images[static_cast<std::size_t>(i) + 1], q);
      }
      if (value < 0.0)
        value = sample_texture(config_.background.texture, textures_->images[0], to_local(bg, p));
      out(x, y) = std::clamp(value, 0.0, 1.0);
    }
  }
  return out;
}

Point Scene::transport(Point p, double t0, double t1) const {
  const int idx = layer_at(p, t0);
  const Layer& layer = idx < 0 ? config_.background : config_.objects[static_cast<std::size_t>(idx)].layer;
  return to_world(layer.pose_at(t1), to_local(layer.pose_at(t0), p));
}

double Scene::max_point_speed(double t) const {
  // Velocity is affine in position, so the maximum over a convex region sits
  // at one of its vertices.
  const double w = config_.width - 1.0;
  const double h = config_.height - 1.0;
  const std::array<Point, 4> frame{{{0, 0}, {w, 0}, {0, h}, {w, h}}};
  double best = 0.0;
  const Pose bg = config_.background.pose_at(t);
  for (const auto& c : frame) best = std::max(best, point_speed(config_.background, bg, c));
  for (const auto& obj : config_.objects) {
    const Pose pose = obj.layer.pose_at(t);
    const std::array<Point, 4> corners{{{-obj.half_width, -obj.half_height},
                                        {obj.half_width, -obj.half_height},
                                        {-obj.half_width, obj.half_height},
                                        {obj.half_width, obj.half_height}}};
    for (const auto& q : corners) best = std::max(best, point_speed(obj.layer, pose, to_world(pose, q)));
  }
  return best;
}

Image render_scene(const SceneConfig& config, double t) {
  require(t >= 0.0 && t <= config.duration, ErrorKind::parameter, "render time outside scene duration");
  return Scene(config).render(t);
}

double adaptive_timestep(const Scene& scene, double t) {
  constexpr double min_step = 1e-5;
  constexpr double max_step = 0.1;
  const double speed = scene.max_point_speed(t);
  if (speed <= 0.0) return max_step;
  return std::clamp(1.0 / speed, min_step, max_step);
}

double adaptive_timestep(const SceneConfig& config, double t) {
  return adaptive_timestep(Scene(config), t);
}

FlowField ground_truth_flow(const Scene& scene, double t0, double t1) {
  require(t0 < t1, ErrorKind::parameter, "ground truth flow needs t0 < t1");
  const auto& cfg = scene.config();
  FlowField flow(cfg.width, cfg.height);
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      const Point p{static_cast<double>(x), static_cast<double>(y)};
      const Point q = scene.transport(p, t0, t1);
      flow.u(x, y) = static_cast<float>(q.x - p.x);
      flow.v(x, y) = static_cast<float>(q.y - p.y);
    }
  }
  return flow;
}

FlowField ground_truth_flow(const SceneConfig& config, double t0, double t1) {
  return ground_truth_flow(Scene(config), t0, t1);
}

FrameSequence render_sequence(const Scene& scene) {
  FrameSequence seq;
  const double duration = scene.config().duration;
  double t = 0.0;
  for (;;) {
    seq.frames.push_back(scene.render(t));
    seq.times.push_back(t);
    if (t >= duration) break;
    t = std::min(duration, t + adaptive_timestep(scene, t));
  }
  return seq;
}

}  // namespace evrecon::sim
