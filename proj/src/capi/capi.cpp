#include "evrecon/evrecon.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "encode/voxel.hpp"
#include "eventsim/scene.hpp"
#include "eventsim/simulator.hpp"
#include "io/container.hpp"
#include "io/events_io.hpp"
#include "io/flo_io.hpp"
#include "io/image_io.hpp"
#include "metrics/metrics.hpp"
#include "pipeline/config.hpp"
#include "pipeline/evaluate.hpp"
#include "pipeline/provider.hpp"
#include "pipeline/run.hpp"
#include "pipeline/scene_json.hpp"
#include "sparse/ista.hpp"
#include "sparse/weights.hpp"
#include "warp/warp.hpp"

using namespace evrecon;

struct evr_events { EventStream s; };
struct evr_image { Image img; };
struct evr_flow { FlowField f; };
struct evr_scene { sim::SceneConfig config; std::unique_ptr<sim::Scene> scene; };
struct evr_weights { sparse::CistaWeights w; };
struct evr_provider { std::unique_ptr<pipeline::FlowProvider> p; };
struct evr_result {
  pipeline::RunResult r;
  std::vector<evr_image> frames;
  std::vector<evr_flow> flows;
};

namespace {

thread_local std::string g_last_error;

evr_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::parameter: return EVR_ERR_PARAMETER;
    case ErrorKind::io: return EVR_ERR_IO;
    case ErrorKind::format: return EVR_ERR_FORMAT;
    case ErrorKind::dimension: return EVR_ERR_DIMENSION;
    case ErrorKind::numeric: return EVR_ERR_NUMERIC;
    case ErrorKind::config: return EVR_ERR_CONFIG;
    case ErrorKind::provider: return EVR_ERR_PROVIDER;
  }
  return EVR_ERR_INTERNAL;
}

// Runs `fn`, translating exceptions into status codes and the thread's
// last-error message.
template <typename Fn>
evr_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EVR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return EVR_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  require(p != nullptr, ErrorKind::parameter, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_echo(const char* text) {
  if (!text) return nlohmann::json::object();
  auto j = nlohmann::json::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrorKind::parameter, "config echo is not valid JSON");
  return j;
}

sim::SimParams to_params(const evr_sim_params& p) {
  sim::SimParams s;
  s.threshold_mean = p.threshold_mean;
  s.threshold_std = p.threshold_std;
  s.neg_pos_ratio_mean = p.neg_pos_ratio_mean;
  s.neg_pos_ratio_std = p.neg_pos_ratio_std;
  s.cutoff_hz = p.cutoff_hz;
  s.refractory_s = p.refractory_s;
  s.leak_rate_hz = p.leak_rate_hz;
  s.shot_noise_hz = p.shot_noise_hz;
  s.seed = p.seed;
  return s;
}

void from_params(const sim::SimParams& s, evr_sim_params* p) {
  *p = {s.threshold_mean, s.threshold_std, s.neg_pos_ratio_mean, s.neg_pos_ratio_std, s.cutoff_hz,
        s.refractory_s, s.leak_rate_hz, s.shot_noise_hz, s.seed};
}

evr_scene* make_scene(sim::SceneConfig cfg) {
  auto out = std::make_unique<evr_scene>();
  out->scene = std::make_unique<sim::Scene>(cfg);
  out->config = std::move(cfg);
  return out.release();
}

}  // namespace

extern "C" {

const char* evr_version(void) { return "1.0.0"; }
const char* evr_last_error(void) { return g_last_error.c_str(); }

const char* evr_status_name(evr_status status) {
  switch (status) {
    case EVR_OK: return "ok";
    case EVR_ERR_PARAMETER: return "parameter error";
    case EVR_ERR_IO: return "i/o error";
    case EVR_ERR_FORMAT: return "format error";
    case EVR_ERR_DIMENSION: return "dimension error";
    case EVR_ERR_NUMERIC: return "numeric error";
    case EVR_ERR_CONFIG: return "config error";
    case EVR_ERR_PROVIDER: return "flow provider error";
    case EVR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void evr_string_free(char* s) { std::free(s); }

// ---- events

evr_status evr_events_create(int32_t width, int32_t height, double t_start, double t_end, evr_events** out) {
  return guarded([&] {
    need(out, "out");
    require(width > 0 && height > 0, ErrorKind::parameter, "sensor size must be positive");
    auto e = std::make_unique<evr_events>();
    e->s.width = width;
    e->s.height = height;
    e->s.t_start = t_start;
    e->s.t_end = t_end;
    *out = e.release();
  });
}

evr_status evr_events_push(evr_events* events, const evr_event* e) {
  return guarded([&] {
    need(events, "events");
    need(e, "event");
    events->s.events.push_back({e->x, e->y, e->t, e->polarity});
  });
}

evr_status evr_events_sort(evr_events* events) {
  return guarded([&] {
    need(events, "events");
    events->s.sort();
  });
}

evr_status evr_events_info(const evr_events* events, int32_t* width, int32_t* height, double* t_start,
                           double* t_end, size_t* count) {
  return guarded([&] {
    need(events, "events");
    if (width) *width = events->s.width;
    if (height) *height = events->s.height;
    if (t_start) *t_start = events->s.t_start;
    if (t_end) *t_end = events->s.t_end;
    if (count) *count = events->s.size();
  });
}

evr_status evr_events_get(const evr_events* events, size_t index, evr_event* out) {
  return guarded([&] {
    need(events, "events");
    need(out, "out");
    require(index < events->s.size(), ErrorKind::parameter, "event index out of range");
    const Event& e = events->s.events[index];
    *out = {e.x, e.y, e.t, e.polarity};
  });
}

evr_status evr_events_read(const char* path, evr_events** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto e = std::make_unique<evr_events>();
    e->s = io::read_events(path);
    *out = e.release();
  });
}

evr_status evr_events_write(const evr_events* events, const char* path, evr_event_format format) {
  return guarded([&] {
    need(events, "events");
    need(path, "path");
    io::write_events(events->s, path, format == EVR_EVENTS_TEXT ? io::EventFormat::text : io::EventFormat::binary);
  });
}

void evr_events_free(evr_events* events) { delete events; }

// ---- images and flow

evr_status evr_image_create(int32_t width, int32_t height, evr_image** out) {
  return guarded([&] {
    need(out, "out");
    require(width > 0 && height > 0, ErrorKind::parameter, "image size must be positive");
    *out = new evr_image{Image(width, height)};
  });
}

evr_status evr_image_size(const evr_image* img, int32_t* width, int32_t* height) {
  return guarded([&] {
    need(img, "image");
    if (width) *width = img->img.width();
    if (height) *height = img->img.height();
  });
}

double* evr_image_data(evr_image* img) { return img ? img->img.pixels().data() : nullptr; }
const double* evr_image_cdata(const evr_image* img) { return img ? img->img.pixels().data() : nullptr; }

evr_status evr_image_read(const char* path, evr_image** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new evr_image{io::read_image(path)};
  });
}

evr_status evr_image_write(const evr_image* img, const char* path, int32_t bit_depth) {
  return guarded([&] {
    need(img, "image");
    need(path, "path");
    io::write_image(img->img, path, bit_depth);
  });
}

evr_status evr_image_signed_display(const evr_image* img, evr_image** out) {
  return guarded([&] {
    need(img, "image");
    need(out, "out");
    *out = new evr_image{io::signed_to_display(img->img)};
  });
}

void evr_image_free(evr_image* img) { delete img; }

evr_status evr_flow_create(int32_t width, int32_t height, evr_flow** out) {
  return guarded([&] {
    need(out, "out");
    require(width > 0 && height > 0, ErrorKind::parameter, "flow size must be positive");
    *out = new evr_flow{FlowField(width, height)};
  });
}

evr_status evr_flow_size(const evr_flow* flow, int32_t* width, int32_t* height) {
  return guarded([&] {
    need(flow, "flow");
    if (width) *width = flow->f.width();
    if (height) *height = flow->f.height();
  });
}

evr_status evr_flow_get(const evr_flow* flow, int32_t x, int32_t y, float* u, float* v) {
  return guarded([&] {
    need(flow, "flow");
    require(x >= 0 && y >= 0 && x < flow->f.width() && y < flow->f.height(), ErrorKind::parameter,
            "flow coordinate out of range");
    if (u) *u = flow->f.u(x, y);
    if (v) *v = flow->f.v(x, y);
  });
}

evr_status evr_flow_set(evr_flow* flow, int32_t x, int32_t y, float u, float v) {
  return guarded([&] {
    need(flow, "flow");
    require(x >= 0 && y >= 0 && x < flow->f.width() && y < flow->f.height(), ErrorKind::parameter,
            "flow coordinate out of range");
    flow->f.u(x, y) = u;
    flow->f.v(x, y) = v;
  });
}

evr_status evr_flow_read(const char* path, evr_flow** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new evr_flow{io::read_flo(path)};
  });
}

evr_status evr_flow_write(const evr_flow* flow, const char* path) {
  return guarded([&] {
    need(flow, "flow");
    need(path, "path");
    io::write_flo(flow->f, path);
  });
}

void evr_flow_free(evr_flow* flow) { delete flow; }

// ---- scenes and simulation

void evr_sim_params_default(evr_sim_params* out) {
  if (out) from_params(sim::SimParams{}, out);
}

void evr_sim_params_ideal(double threshold, uint64_t seed, evr_sim_params* out) {
  if (out) from_params(sim::ideal_params(threshold, seed), out);
}

evr_status evr_scene_random(int32_t width, int32_t height, double duration, int32_t objects, uint64_t seed,
                            evr_scene** out) {
  return guarded([&] {
    need(out, "out");
    require(objects >= 0, ErrorKind::parameter, "object count must be nonnegative");
    auto cfg = sim::random_scene(width, height, duration, objects, seed);
    cfg.validate();
    *out = make_scene(std::move(cfg));
  });
}

evr_status evr_scene_from_json(const char* json, evr_scene** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    auto j = nlohmann::json::parse(json, nullptr, false);
    require(!j.is_discarded(), ErrorKind::format, "scene description is not valid JSON");
    *out = make_scene(pipeline::scene_from_json(j));
  });
}

evr_status evr_scene_to_json(const evr_scene* scene, char** out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    *out = dup_string(pipeline::scene_to_json(scene->config).dump(2));
  });
}

evr_status evr_scene_read(const char* path, evr_scene** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = make_scene(pipeline::read_scene(path));
  });
}

evr_status evr_scene_write(const evr_scene* scene, const char* path) {
  return guarded([&] {
    need(scene, "scene");
    need(path, "path");
    pipeline::write_scene(scene->config, path);
  });
}

evr_status evr_scene_info(const evr_scene* scene, int32_t* width, int32_t* height, double* duration) {
  return guarded([&] {
    need(scene, "scene");
    if (width) *width = scene->config.width;
    if (height) *height = scene->config.height;
    if (duration) *duration = scene->config.duration;
  });
}

evr_status evr_scene_render(const evr_scene* scene, double t, evr_image** out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    *out = new evr_image{scene->scene->render(t)};
  });
}

evr_status evr_scene_flow(const evr_scene* scene, double t0, double t1, evr_flow** out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    *out = new evr_flow{sim::ground_truth_flow(*scene->scene, t0, t1)};
  });
}

evr_status evr_simulate(const evr_scene* scene, const evr_sim_params* params, evr_events** out) {
  return guarded([&] {
    need(scene, "scene");
    need(params, "params");
    need(out, "out");
    const sim::FrameSequence seq = sim::render_sequence(*scene->scene);
    auto e = std::make_unique<evr_events>();
    e->s = sim::emit_events(seq.frames, seq.times, to_params(*params));
    *out = e.release();
  });
}

void evr_scene_free(evr_scene* scene) { delete scene; }

// ---- encoding and warping

evr_status evr_encode_voxels(const evr_events* events, int32_t bins, size_t n_events, int32_t normalize,
                             const char* dir, size_t* n_groups) {
  return guarded([&] {
    need(events, "events");
    need(dir, "dir");
    const EventStream& s = events->s;
    s.validate();
    std::vector<EventStream> windows;
    if (n_events == 0 || s.empty()) {
      windows.push_back(s);
    } else {
      for (auto& g : pipeline::step_groups(s, n_events)) windows.push_back(std::move(g.events));
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec && std::filesystem::is_directory(dir), ErrorKind::io, std::string("cannot create directory ") + dir);
    char name[32];
    for (std::size_t i = 0; i < windows.size(); ++i) {
      encode::VoxelGrid grid = encode::build_voxel_grid(windows[i], bins, windows[i].t_start, windows[i].t_end);
      if (normalize) encode::normalize_max_abs(grid);
      io::TensorContainer c;
      c.add_f64("voxel", {grid.bins(), grid.height(), grid.width()}, grid.data.values());
      c.add_f64("window", {2}, {grid.t_start, grid.t_end});
      std::snprintf(name, sizeof name, "voxel_%04zu.cwts", i);
      io::write_container(c, std::filesystem::path(dir) / name);
    }
    if (n_groups) *n_groups = windows.size();
  });
}

evr_status evr_step_windows(const evr_events* events, size_t n_events, double* starts, double* ends,
                            size_t capacity, size_t* count) {
  return guarded([&] {
    need(events, "events");
    require(n_events >= 1, ErrorKind::parameter, "events per group must be at least 1");
    events->s.validate();
    const auto groups = pipeline::step_groups(events->s, n_events);
    for (std::size_t i = 0; i < groups.size() && i < capacity; ++i) {
      if (starts) starts[i] = groups[i].events.t_start;
      if (ends) ends[i] = groups[i].events.t_end;
    }
    if (count) *count = groups.size();
  });
}

evr_status evr_event_image(const evr_events* events, evr_image** out) {
  return guarded([&] {
    need(events, "events");
    need(out, "out");
    events->s.validate();
    *out = new evr_image{encode::event_image(events->s)};
  });
}

evr_status evr_warp_events(const evr_events* events, const evr_flow* flow, double t_ref, evr_image** out) {
  return guarded([&] {
    need(events, "events");
    need(flow, "flow");
    need(out, "out");
    events->s.validate();
    *out = new evr_image{warp::warp_events(events->s, flow->f, t_ref)};
  });
}

evr_status evr_fwl(const evr_events* events, const evr_flow* flow, double t_ref, double* out) {
  return guarded([&] {
    need(events, "events");
    need(flow, "flow");
    need(out, "out");
    events->s.validate();
    *out = warp::fwl(events->s, flow->f, t_ref);
  });
}

evr_status evr_warp_frame(const evr_image* frame, const evr_flow* flow, evr_image** out) {
  return guarded([&] {
    need(frame, "frame");
    need(flow, "flow");
    need(out, "out");
    *out = new evr_image{warp::forward_warp_frame(frame->img, flow->f)};
  });
}

// ---- metrics

evr_status evr_mse(const evr_image* a, const evr_image* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = metrics::mse(a->img, b->img);
  });
}

evr_status evr_ssim(const evr_image* a, const evr_image* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = metrics::ssim(a->img, b->img);
  });
}

evr_status evr_epe(const evr_flow* pred, const evr_flow* gt, double* out) {
  return guarded([&] {
    need(pred, "pred");
    need(gt, "gt");
    need(out, "out");
    *out = metrics::epe(pred->f, gt->f);
  });
}

evr_status evr_outlier_pct(const evr_flow* pred, const evr_flow* gt, double* out) {
  return guarded([&] {
    need(pred, "pred");
    need(gt, "gt");
    need(out, "out");
    *out = metrics::outlier_pct(pred->f, gt->f);
  });
}

// ---- weights

void evr_bridge_options_default(evr_bridge_options* out) {
  if (!out) return;
  *out = {5, 5, 0.01, 1.0, 0.1, 1};
}

evr_status evr_weights_bridge(const evr_bridge_options* options, evr_weights** out) {
  return guarded([&] {
    need(options, "options");
    need(out, "out");
    sparse::BridgeOptions bo;
    bo.bins = options->bins;
    bo.frame_gain = options->frame_gain;
    bo.event_gain = options->event_gain;
    bo.warm_start = options->warm_start != 0;
    require(options->bins >= 1 && options->blocks >= 1, ErrorKind::parameter, "bins and blocks must be at least 1");
    *out = new evr_weights{sparse::bridge_weights(options->lambda, options->blocks, bo)};
  });
}

evr_status evr_weights_random(const evr_arch* arch, uint64_t seed, double scale, evr_weights** out) {
  return guarded([&] {
    need(arch, "arch");
    need(out, "out");
    sparse::CistaArch a{arch->bins, arch->features, arch->codes, arch->kernel, arch->blocks, arch->lsrc_channels};
    *out = new evr_weights{sparse::random_weights(a, seed, scale)};
  });
}

evr_status evr_weights_load(const char* path, evr_weights** out, size_t* n_ignored) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::vector<std::string> warnings;
    auto w = sparse::load_weights(path, &warnings);
    if (n_ignored) *n_ignored = warnings.size();
    *out = new evr_weights{std::move(w)};
  });
}

evr_status evr_weights_save(const evr_weights* w, const char* path) {
  return guarded([&] {
    need(w, "weights");
    need(path, "path");
    sparse::save_weights(w->w, path);
  });
}

evr_status evr_weights_arch(const evr_weights* w, evr_arch* out) {
  return guarded([&] {
    need(w, "weights");
    need(out, "out");
    const auto& a = w->w.arch();
    *out = {a.bins, a.features, a.codes, a.kernel, a.blocks, a.lsrc_channels};
  });
}

void evr_weights_free(evr_weights* w) { delete w; }

// ---- reconstruction

evr_status evr_provider_zero(evr_provider** out) {
  return guarded([&] {
    need(out, "out");
    *out = new evr_provider{std::make_unique<pipeline::ZeroFlowProvider>()};
  });
}

evr_status evr_provider_ground_truth(const evr_scene* scene, evr_provider** out) {
  return guarded([&] {
    need(scene, "scene");
    need(out, "out");
    *out = new evr_provider{std::make_unique<pipeline::GroundTruthFlowProvider>(scene->config)};
  });
}

evr_status evr_provider_external(const char* dir, evr_provider** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    *out = new evr_provider{std::make_unique<pipeline::ExternalFlowProvider>(dir)};
  });
}

void evr_provider_free(evr_provider* p) { delete p; }

void evr_run_config_default(evr_run_config* out) {
  if (!out) return;
  const pipeline::RunConfig d;
  *out = {d.bins, d.events_per_group, EVR_WARP_FRAME_AND_CODES, d.normalize_voxels, d.record_timings,
          d.emit_initial_frame};
}

evr_status evr_reconstruct(const evr_events* events, const evr_run_config* config, evr_provider* provider,
                           const evr_weights* weights, evr_result** out) {
  return guarded([&] {
    need(events, "events");
    need(config, "config");
    need(provider, "provider");
    need(weights, "weights");
    need(out, "out");
    pipeline::RunConfig cfg;
    cfg.bins = config->bins;
    cfg.events_per_group = config->events_per_group;
    switch (config->warp) {
      case EVR_WARP_NONE: cfg.warp = pipeline::WarpMode::none; break;
      case EVR_WARP_FRAME: cfg.warp = pipeline::WarpMode::frame; break;
      case EVR_WARP_FRAME_AND_CODES: cfg.warp = pipeline::WarpMode::frame_and_codes; break;
      default: fail(ErrorKind::config, "unknown warp mode");
    }
    cfg.normalize_voxels = config->normalize_voxels != 0;
    cfg.record_timings = config->record_timings != 0;
    cfg.emit_initial_frame = config->emit_initial_frame != 0;
    auto res = std::make_unique<evr_result>();
    res->r = pipeline::run_reconstruction(events->s, cfg, *provider->p, weights->w);
    for (const auto& f : res->r.frames) res->frames.push_back({f});
    for (const auto& f : res->r.flows) res->flows.push_back({f});
    *out = res.release();
  });
}

size_t evr_result_frame_count(const evr_result* r) { return r ? r->frames.size() : 0; }

const evr_image* evr_result_frame(const evr_result* r, size_t index) {
  return r && index < r->frames.size() ? &r->frames[index] : nullptr;
}

const evr_flow* evr_result_flow(const evr_result* r, size_t index) {
  return r && index < r->flows.size() ? &r->flows[index] : nullptr;
}

double evr_result_frame_time(const evr_result* r, size_t index) {
  return r && index < r->r.frame_times.size() ? r->r.frame_times[index] : 0.0;
}

evr_status evr_result_write(const evr_result* r, const char* dir, int32_t bit_depth, int32_t write_flows) {
  return guarded([&] {
    need(r, "result");
    need(dir, "dir");
    std::span<const FlowField> flows;
    if (write_flows) flows = r->r.flows;
    pipeline::write_frame_dir(dir, r->r.frames, r->r.frame_times, flows, bit_depth);
  });
}

evr_status evr_result_report_json(const evr_result* r, const char* config_echo_json, char** out) {
  return guarded([&] {
    need(r, "result");
    need(out, "out");
    pipeline::Report report = r->r.report;
    report.config_echo = parse_echo(config_echo_json);
    *out = dup_string(pipeline::report_to_json(report).dump(2) + "\n");
  });
}

void evr_result_free(evr_result* r) { delete r; }

// ---- evaluation

evr_status evr_evaluate(const evr_eval_options* options, const char* config_echo_json, int32_t csv, char** out) {
  return guarded([&] {
    need(options, "options");
    need(out, "out");
    require(options->pred_dir || options->flow_pred_dir, ErrorKind::parameter,
            "need predicted frames or predicted flows");
    pipeline::FrameSet pred;
    if (options->pred_dir) pred = pipeline::read_frame_dir(options->pred_dir);
    if (options->flow_pred_dir) pred.flows = pipeline::read_frame_dir(options->flow_pred_dir).flows;
    std::optional<pipeline::FrameSet> ref;
    if (options->gt_dir || options->flow_gt_dir) {
      ref.emplace();
      if (options->gt_dir) *ref = pipeline::read_frame_dir(options->gt_dir);
      if (options->flow_gt_dir) ref->flows = pipeline::read_frame_dir(options->flow_gt_dir).flows;
    }
    pipeline::EvaluateOptions eo;
    eo.normalize = options->normalize != 0;
    if (options->events) {
      options->events->s.validate();
      eo.events = &options->events->s;
      eo.events_per_group = options->events_per_group;
      require(eo.events_per_group >= 1, ErrorKind::config, "events per group must be at least 1");
    }
    pipeline::Report report = pipeline::evaluate(pred, ref ? &*ref : nullptr, eo);
    report.config_echo = parse_echo(config_echo_json);
    *out = dup_string(csv ? pipeline::report_to_csv(report) : pipeline::report_to_json(report).dump(2) + "\n");
  });
}

// ---- configuration

evr_status evr_config_load(const char* path, char** json_out) {
  return guarded([&] {
    need(path, "path");
    need(json_out, "json_out");
    *json_out = dup_string(pipeline::load_config(path).dump());
  });
}

}  // extern "C"
