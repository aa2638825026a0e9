// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "evrecon/evrecon.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kInput = 2, kNumeric = 3, kConfig = 4 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(evr_status s) {
  switch (s) {
    case EVR_OK: return kOk;
    case EVR_ERR_NUMERIC: return kNumeric;
    case EVR_ERR_CONFIG: return kConfig;
    case EVR_ERR_INTERNAL: return kInternal;
    default: return kInput;
  }
}

void check(evr_status s) {
  if (s != EVR_OK) throw Failure{exit_code(s), std::string(evr_status_name(s)) + ": " + evr_last_error()};
}

[[noreturn]] void config_error(const std::string& msg) { throw Failure{kConfig, "config error: " + msg}; }

template <typename T, void (*Free)(T*)>
struct Owned {
  T* p = nullptr;
  Owned() = default;
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  ~Owned() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Events = Owned<evr_events, evr_events_free>;
using Scene = Owned<evr_scene, evr_scene_free>;
using ImageH = Owned<evr_image, evr_image_free>;
using Flow = Owned<evr_flow, evr_flow_free>;
using Weights = Owned<evr_weights, evr_weights_free>;
using Provider = Owned<evr_provider, evr_provider_free>;
using Result = Owned<evr_result, evr_result_free>;

struct CString {
  char* p = nullptr;
  ~CString() { evr_string_free(p); }
};

struct Globals {
  std::uint64_t seed = 0;
  std::string config_path;
  bool verbose = false;
  json config = json::object();
};

void log(const Globals& g, const std::string& msg) {
  if (g.verbose) std::fprintf(stderr, "[evrecon] %s\n", msg.c_str());
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  char* text = nullptr;
  check(evr_config_load(path.c_str(), &text));
  const CString owned{text};
  return json::parse(text);
}

json section(const Globals& g, const char* name) {
  if (!g.config.contains(name)) return json::object();
  const json& s = g.config.at(name);
  if (!s.is_object()) config_error(std::string("section '") + name + "' must be an object");
  return s;
}

// Takes `key` from the config section unless the flag was given explicitly.
template <typename T>
void overlay(const json& sec, const char* key, const CLI::Option* opt, T& value) {
  if (opt && opt->count() > 0) return;
  if (!sec.contains(key)) return;
  try {
    value = sec.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("bad value for '") + key + "'");
  }
}

void reject_unknown(const json& sec, const char* name, std::initializer_list<const char*> known) {
  for (const auto& [key, _] : sec.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) config_error(std::string("unknown key '") + key + "' in section '" + name + "'");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Failure{kInput, "cannot write " + path.string()};
}

// ---- simulate

struct SimulateArgs {
  std::string out_events;
  std::string out_frames;
  std::string out_flow;
  std::string out_scene;
  std::string scene;
  int width = 64;
  int height = 64;
  double duration = 0.5;
  int objects = 2;
  double frame_rate = 20.0;
  std::size_t n_events = 0;
  double ideal = 0.0;
  evr_sim_params params{};
};

const std::pair<const char*, double evr_sim_params::*> kSimFields[] = {
    {"threshold_mean", &evr_sim_params::threshold_mean},
    {"threshold_std", &evr_sim_params::threshold_std},
    {"neg_pos_ratio_mean", &evr_sim_params::neg_pos_ratio_mean},
    {"neg_pos_ratio_std", &evr_sim_params::neg_pos_ratio_std},
    {"cutoff_hz", &evr_sim_params::cutoff_hz},
    {"refractory_s", &evr_sim_params::refractory_s},
    {"leak_rate_hz", &evr_sim_params::leak_rate_hz},
    {"shot_noise_hz", &evr_sim_params::shot_noise_hz},
};

std::string flag_name(const char* key) {
  std::string f = std::string("--") + key;
  for (char& c : f)
    if (c == '_') c = '-';
  return f;
}

std::string numbered(const char* stem, int i, const char* ext) {
  char name[40];
  std::snprintf(name, sizeof name, "%s_%04d%s", stem, i, ext);
  return name;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Failure{kInput, "cannot create directory " + dir.string()};
}

int run_simulate(const Globals& g, SimulateArgs a, CLI::App& cmd) {
  const json sec = section(g, "simulate");
  reject_unknown(sec, "simulate",
                 {"width", "height", "duration", "objects", "frame_rate", "ideal", "n_events", "threshold_mean",
                  "threshold_std", "neg_pos_ratio_mean", "neg_pos_ratio_std", "cutoff_hz", "refractory_s",
                  "leak_rate_hz", "shot_noise_hz"});
  overlay(sec, "width", cmd.get_option("--width"), a.width);
  overlay(sec, "height", cmd.get_option("--height"), a.height);
  overlay(sec, "duration", cmd.get_option("--duration"), a.duration);
  overlay(sec, "objects", cmd.get_option("--objects"), a.objects);
  overlay(sec, "frame_rate", cmd.get_option("--frame-rate"), a.frame_rate);
  overlay(sec, "ideal", cmd.get_option("--ideal"), a.ideal);
  overlay(sec, "n_events", cmd.get_option("--n-events"), a.n_events);
  if (a.frame_rate < 0) config_error("frame rate must be nonnegative");

  // Sensor model: defaults (or the ideal model), then config, then flags.
  evr_sim_params params;
  if (a.ideal > 0) evr_sim_params_ideal(a.ideal, g.seed + 1, &params);
  else {
    evr_sim_params_default(&params);
    params.seed = g.seed + 1;
  }
  for (const auto& [key, field] : kSimFields) {
    const CLI::Option* opt = cmd.get_option(flag_name(key));
    if (opt->count() > 0) params.*field = a.params.*field;
    else overlay(sec, key, nullptr, params.*field);
  }

  Scene scene;
  if (!a.scene.empty()) check(evr_scene_read(a.scene.c_str(), scene.out()));
  else check(evr_scene_random(a.width, a.height, a.duration, a.objects, g.seed, scene.out()));
  double duration = 0;
  check(evr_scene_info(scene.get(), nullptr, nullptr, &duration));

  log(g, "simulating events");
  Events events;
  check(evr_simulate(scene.get(), &params, events.out()));

  const fs::path events_path(a.out_events);
  if (events_path.has_parent_path()) make_dir(events_path.parent_path());
  const bool text = events_path.extension() == ".txt";
  check(evr_events_write(events.get(), a.out_events.c_str(), text ? EVR_EVENTS_TEXT : EVR_EVENTS_BINARY));
  const fs::path scene_path =
      a.out_scene.empty() ? events_path.parent_path() / "scene.json" : fs::path(a.out_scene);
  check(evr_scene_write(scene.get(), scene_path.string().c_str()));

  // Reference frames at a fixed rate, both ends included.
  std::vector<double> frame_times;
  if (a.frame_rate > 0) {
    const int n = static_cast<int>(duration * a.frame_rate + 1e-9);
    for (int i = 0; i <= n; ++i) frame_times.push_back(i / a.frame_rate);
  }
  if (!a.out_frames.empty()) {
    make_dir(a.out_frames);
    std::string stamps;
    for (std::size_t i = 0; i < frame_times.size(); ++i) {
      ImageH img;
      check(evr_scene_render(scene.get(), frame_times[i], img.out()));
      const fs::path p = fs::path(a.out_frames) / numbered("frame", static_cast<int>(i), ".png");
      check(evr_image_write(img.get(), p.string().c_str(), 16));
      char line[40];
      std::snprintf(line, sizeof line, "%.17g\n", frame_times[i]);
      stamps += line;
    }
    write_text(fs::path(a.out_frames) / "timestamps.txt", stamps);
  }

  // Ground-truth flow per reconstruction step when a group size is given,
  // otherwise between consecutive reference frames.
  if (!a.out_flow.empty()) {
    make_dir(a.out_flow);
    std::vector<double> starts;
    std::vector<double> ends;
    if (a.n_events > 0) {
      size_t count = 0;
      check(evr_step_windows(events.get(), a.n_events, nullptr, nullptr, 0, &count));
      starts.resize(count);
      ends.resize(count);
      check(evr_step_windows(events.get(), a.n_events, starts.data(), ends.data(), count, &count));
    } else {
      for (std::size_t i = 0; i + 1 < frame_times.size(); ++i) {
        starts.push_back(frame_times[i]);
        ends.push_back(frame_times[i + 1]);
      }
    }
    for (std::size_t i = 0; i < starts.size(); ++i) {
      Flow flow;
      check(evr_scene_flow(scene.get(), starts[i], ends[i], flow.out()));
      const fs::path p = fs::path(a.out_flow) / numbered("flow", static_cast<int>(i), ".flo");
      check(evr_flow_write(flow.get(), p.string().c_str()));
    }
  }

  size_t count = 0;
  check(evr_events_info(events.get(), nullptr, nullptr, nullptr, nullptr, &count));
  std::printf("simulated %zu events -> %s\n", count, a.out_events.c_str());
  return kOk;
}

// ---- encode

struct EncodeArgs {
  std::string events;
  std::string out_dir;
  int bins = 5;
  std::size_t n_events = 0;
  bool normalize = false;
};

int run_encode(const Globals& g, EncodeArgs a, CLI::App& cmd) {
  const json sec = section(g, "encode");
  reject_unknown(sec, "encode", {"bins", "n_events", "normalize"});
  overlay(sec, "bins", cmd.get_option("--bins"), a.bins);
  overlay(sec, "n_events", cmd.get_option("--n-events"), a.n_events);
  overlay(sec, "normalize", cmd.get_option("--normalize"), a.normalize);
  if (a.bins < 1) config_error("bins must be at least 1");
  Events events;
  check(evr_events_read(a.events.c_str(), events.out()));
  size_t groups = 0;
  log(g, "building voxel grids");
  check(evr_encode_voxels(events.get(), a.bins, a.n_events, a.normalize, a.out_dir.c_str(), &groups));
  std::printf("wrote %zu voxel grid(s) -> %s\n", groups, a.out_dir.c_str());
  return kOk;
}

// ---- reconstruct

struct ReconstructArgs {
  std::string events;
  std::string out;
  std::string weights;
  std::string flow = "zero";
  std::string scene;
  std::string report;
  std::string warp = "frame_and_codes";
  int bins = 5;
  std::size_t n_events = 15000;
  int bit_depth = 16;
  bool timings = false;
  bool write_flows = false;
  bool initial_frame = false;
  bool normalize = false;
};

evr_warp_mode parse_warp(const std::string& s) {
  if (s == "none") return EVR_WARP_NONE;
  if (s == "frame") return EVR_WARP_FRAME;
  if (s == "frame_and_codes") return EVR_WARP_FRAME_AND_CODES;
  config_error("unknown warp mode '" + s + "' (none, frame, frame_and_codes)");
}

int run_reconstruct(const Globals& g, ReconstructArgs a, CLI::App& cmd) {
  const json sec = section(g, "reconstruct");
  reject_unknown(sec, "reconstruct",
                 {"bins", "n_events", "warp", "flow", "timings", "write_flows", "initial_frame", "normalize",
                  "bit_depth"});
  overlay(sec, "bins", cmd.get_option("--bins"), a.bins);
  overlay(sec, "n_events", cmd.get_option("--n-events"), a.n_events);
  overlay(sec, "warp", cmd.get_option("--warp"), a.warp);
  overlay(sec, "flow", cmd.get_option("--flow"), a.flow);
  overlay(sec, "timings", cmd.get_option("--timings"), a.timings);
  overlay(sec, "write_flows", cmd.get_option("--write-flows"), a.write_flows);
  overlay(sec, "initial_frame", cmd.get_option("--initial-frame"), a.initial_frame);
  overlay(sec, "normalize", cmd.get_option("--normalize"), a.normalize);
  overlay(sec, "bit_depth", cmd.get_option("--bit-depth"), a.bit_depth);
  if (a.bins < 1 || a.n_events < 1) config_error("bins and n_events must be at least 1");
  if (a.bit_depth != 8 && a.bit_depth != 16) config_error("bit depth must be 8 or 16");

  evr_run_config rc;
  evr_run_config_default(&rc);
  rc.bins = a.bins;
  rc.events_per_group = a.n_events;
  rc.warp = parse_warp(a.warp);
  rc.record_timings = a.timings;
  rc.emit_initial_frame = a.initial_frame;
  rc.normalize_voxels = a.normalize;

  json echo = {{"bins", a.bins}, {"n_events", a.n_events}, {"warp", a.warp}, {"normalize", a.normalize},
               {"seed", g.seed}};

  Weights weights;
  if (!a.weights.empty()) {
    size_t ignored = 0;
    check(evr_weights_load(a.weights.c_str(), weights.out(), &ignored));
    if (ignored > 0) std::fprintf(stderr, "warning: %zu unknown tensor(s) in %s ignored\n", ignored, a.weights.c_str());
    echo["weights"] = "file";
  } else {
    evr_bridge_options bo;
    evr_bridge_options_default(&bo);
    bo.bins = a.bins;
    const json bs = section(g, "bridge");
    reject_unknown(bs, "bridge", {"lambda", "blocks", "frame_gain", "event_gain", "warm_start"});
    overlay(bs, "lambda", nullptr, bo.lambda);
    overlay(bs, "blocks", nullptr, bo.blocks);
    overlay(bs, "frame_gain", nullptr, bo.frame_gain);
    overlay(bs, "event_gain", nullptr, bo.event_gain);
    overlay(bs, "warm_start", nullptr, bo.warm_start);
    check(evr_weights_bridge(&bo, weights.out()));
    echo["weights"] = {{"bridge", {{"lambda", bo.lambda}, {"blocks", bo.blocks}, {"frame_gain", bo.frame_gain},
                                   {"event_gain", bo.event_gain}, {"warm_start", bo.warm_start}}}};
  }

  Provider provider;
  Scene scene;
  if (a.flow == "zero") {
    check(evr_provider_zero(provider.out()));
    echo["flow"] = "zero";
  } else if (a.flow == "gt") {
    if (a.scene.empty()) config_error("--flow gt needs --scene");
    check(evr_scene_read(a.scene.c_str(), scene.out()));
    check(evr_provider_ground_truth(scene.get(), provider.out()));
    echo["flow"] = "ground_truth";
  } else {
    check(evr_provider_external(a.flow.c_str(), provider.out()));
    echo["flow"] = "external";
  }

  Events events;
  check(evr_events_read(a.events.c_str(), events.out()));
  log(g, "reconstructing");
  Result result;
  check(evr_reconstruct(events.get(), &rc, provider.get(), weights.get(), result.out()));
  check(evr_result_write(result.get(), a.out.c_str(), a.bit_depth, a.write_flows));

  CString report;
  const std::string echo_text = echo.dump();
  check(evr_result_report_json(result.get(), echo_text.c_str(), &report.p));
  const fs::path report_path = a.report.empty() ? fs::path(a.out) / "report.json" : fs::path(a.report);
  write_text(report_path, report.p);
  std::printf("reconstructed %zu frame(s) -> %s\n", evr_result_frame_count(result.get()), a.out.c_str());
  return kOk;
}

// ---- evaluate

struct EvaluateArgs {
  std::string pred_dir;
  std::string gt_dir;
  std::string flow_pred_dir;
  std::string flow_gt_dir;
  std::string events;
  std::string report;
  std::size_t n_events = 15000;
  bool normalize = false;
};

int run_evaluate(const Globals& g, EvaluateArgs a, CLI::App& cmd) {
  const json sec = section(g, "evaluate");
  reject_unknown(sec, "evaluate", {"n_events", "normalize"});
  overlay(sec, "n_events", cmd.get_option("--n-events"), a.n_events);
  overlay(sec, "normalize", cmd.get_option("--normalize"), a.normalize);
  if (a.n_events < 1) config_error("n_events must be at least 1");
  if (a.pred_dir.empty() && a.flow_pred_dir.empty()) config_error("give --pred-dir and/or --flow-pred-dir");

  auto opt_str = [](const std::string& s) { return s.empty() ? nullptr : s.c_str(); };
  Events events;
  evr_eval_options eo{};
  eo.pred_dir = opt_str(a.pred_dir);
  eo.gt_dir = opt_str(a.gt_dir);
  eo.flow_pred_dir = opt_str(a.flow_pred_dir);
  eo.flow_gt_dir = opt_str(a.flow_gt_dir);
  if (!a.events.empty()) {
    check(evr_events_read(a.events.c_str(), events.out()));
    eo.events = events.get();
  }
  eo.events_per_group = a.n_events;
  eo.normalize = a.normalize;
  const json echo = {{"n_events", a.n_events},
                     {"normalize", a.normalize},
                     {"frames", !a.pred_dir.empty()},
                     {"reference_frames", !a.gt_dir.empty()},
                     {"flows", !a.flow_pred_dir.empty()},
                     {"reference_flows", !a.flow_gt_dir.empty()},
                     {"events", !a.events.empty()}};
  const bool csv = fs::path(a.report).extension() == ".csv";
  CString report;
  log(g, "evaluating");
  check(evr_evaluate(&eo, echo.dump().c_str(), csv, &report.p));
  if (a.report.empty()) std::fputs(report.p, stdout);
  else write_text(a.report, report.p);
  return kOk;
}

// ---- fwl

struct FwlArgs {
  std::string events;
  std::string flow;
  std::optional<double> t_ref;
  std::string out_warped;
  std::string out_unwarped;
};

void write_signed(const evr_image* img, const std::string& path) {
  ImageH display;
  check(evr_image_signed_display(img, display.out()));
  check(evr_image_write(display.get(), path.c_str(), 8));
}

int run_fwl(const Globals&, const FwlArgs& a) {
  Events events;
  Flow flow;
  check(evr_events_read(a.events.c_str(), events.out()));
  check(evr_flow_read(a.flow.c_str(), flow.out()));
  double t_end = 0;
  check(evr_events_info(events.get(), nullptr, nullptr, nullptr, &t_end, nullptr));
  const double t_ref = a.t_ref.value_or(t_end);
  double v = 0;
  check(evr_fwl(events.get(), flow.get(), t_ref, &v));
  if (!a.out_warped.empty()) {
    ImageH img;
    check(evr_warp_events(events.get(), flow.get(), t_ref, img.out()));
    write_signed(img.get(), a.out_warped);
  }
  if (!a.out_unwarped.empty()) {
    ImageH img;
    check(evr_event_image(events.get(), img.out()));
    write_signed(img.get(), a.out_unwarped);
  }
  std::printf("%.17g\n", v);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-camera simulation and recursive sparse-coding video reconstruction"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_option("--config", g.config_path, "Configuration file (.toml or JSON)");
  app.add_flag("--verbose,-v", g.verbose, "Progress messages on stderr");

  SimulateArgs sa;
  evr_sim_params_default(&sa.params);
  auto* sim = app.add_subcommand("simulate", "Render a random (or given) scene and emit events");
  sim->add_option("--out-events", sa.out_events, "Event file (.txt for text, binary otherwise)")->required();
  sim->add_option("--out-frames-dir", sa.out_frames, "Reference frames and timestamps.txt");
  sim->add_option("--out-flow-dir", sa.out_flow, "Ground-truth flow_NNNN.flo files");
  sim->add_option("--out-scene", sa.out_scene, "Scene description (default: scene.json beside the events)");
  sim->add_option("--scene", sa.scene, "Scene description (JSON) instead of a random scene");
  sim->add_option("--width", sa.width)->capture_default_str();
  sim->add_option("--height", sa.height)->capture_default_str();
  sim->add_option("--duration", sa.duration, "Seconds")->capture_default_str();
  sim->add_option("--objects", sa.objects, "Foreground objects (0-10)")->capture_default_str();
  sim->add_option("--frame-rate", sa.frame_rate, "Reference frame rate in Hz (0: none)")->capture_default_str();
  sim->add_option("--n-events", sa.n_events, "Align ground-truth flows with groups of this many events");
  sim->add_option("--ideal", sa.ideal, "Noise-free sensor with this contrast threshold");
  for (const auto& [key, field] : kSimFields)
    sim->add_option(flag_name(key), sa.params.*field)->capture_default_str();

  EncodeArgs ea;
  auto* enc = app.add_subcommand("encode", "Convert events to voxel grids");
  enc->add_option("--events", ea.events)->required();
  enc->add_option("--out-dir", ea.out_dir, "One voxel_NNNN.cwts per group")->required();
  enc->add_option("--bins", ea.bins)->capture_default_str();
  enc->add_option("--n-events", ea.n_events, "Events per grid (0: whole stream)")->capture_default_str();
  enc->add_flag("--normalize", ea.normalize, "Scale each grid by its largest magnitude");

  ReconstructArgs ra;
  auto* rec = app.add_subcommand("reconstruct", "Recursive frame reconstruction from events");
  rec->add_option("--events", ra.events)->required();
  rec->add_option("--out", ra.out, "Output directory")->required();
  rec->add_option("--weights", ra.weights, "Weight container (default: sparse-coding bridge)");
  rec->add_option("--flow", ra.flow, "zero | gt | directory of flow_NNNN.flo")->capture_default_str();
  rec->add_option("--scene", ra.scene, "Scene description for --flow gt");
  rec->add_option("--report", ra.report, "Report path (default: <out>/report.json)");
  rec->add_option("--warp", ra.warp, "none | frame | frame_and_codes")->capture_default_str();
  rec->add_option("--bins", ra.bins)->capture_default_str();
  rec->add_option("--n-events", ra.n_events, "Events per reconstruction step")->capture_default_str();
  rec->add_option("--bit-depth", ra.bit_depth, "Output PNG bit depth")->capture_default_str();
  rec->add_flag("--timings", ra.timings, "Record wall-clock time per step");
  rec->add_flag("--write-flows", ra.write_flows, "Write the flow used at each step");
  rec->add_flag("--initial-frame", ra.initial_frame, "Also emit the zero initial frame");
  rec->add_flag("--normalize", ra.normalize, "Normalize voxel grids");

  EvaluateArgs va;
  auto* eval = app.add_subcommand("evaluate", "Score reconstructions against references");
  eval->add_option("--pred-dir", va.pred_dir, "Reconstructed frames");
  eval->add_option("--gt-dir", va.gt_dir, "Reference frames");
  eval->add_option("--flow-pred-dir", va.flow_pred_dir, "Predicted flows");
  eval->add_option("--flow-gt-dir", va.flow_gt_dir, "Reference flows");
  eval->add_option("--events", va.events, "Event stream, enables per-step FWL");
  eval->add_option("--n-events", va.n_events)->capture_default_str();
  eval->add_option("--report", va.report, "Output file (.json or .csv; default stdout)");
  eval->add_flag("--normalize", va.normalize, "Rescale frames to [0, 1] first");

  FwlArgs fa;
  auto* fwl = app.add_subcommand("fwl", "Forward warping loss of an event stream under a flow");
  fwl->add_option("--events", fa.events)->required();
  fwl->add_option("--flow", fa.flow)->required();
  fwl->add_option("--t-ref", fa.t_ref, "Reference time (default: end of the stream window)");
  fwl->add_option("--out-warped", fa.out_warped, "Warped event image (PNG/PGM)");
  fwl->add_option("--out-unwarped", fa.out_unwarped, "Unwarped event image (PNG/PGM)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    g.config = load_config(g.config_path);
    if (*sim) return run_simulate(g, sa, *sim);
    if (*enc) return run_encode(g, ea, *enc);
    if (*rec) return run_reconstruct(g, ra, *rec);
    if (*eval) return run_evaluate(g, va, *eval);
    if (*fwl) return run_fwl(g, fa);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInternal;
  }
  return kInternal;
}
