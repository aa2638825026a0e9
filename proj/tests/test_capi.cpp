// Exercises the shared library strictly through its public C header.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include "evrecon/evrecon.h"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path path;
  explicit Scratch(const char* tag) {
    path = fs::temp_directory_path() / (std::string("evrecon_capi_") + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

evr_events* make_stream() {
  evr_events* ev = nullptr;
  REQUIRE(evr_events_create(8, 6, 0.0, 1.0, &ev) == EVR_OK);
  const evr_event list[] = {{1, 1, 0.5, 1}, {2, 3, 0.1, -1}, {7, 5, 0.9, 1}, {4, 4, 0.3, 1}};
  for (const auto& e : list) REQUIRE(evr_events_push(ev, &e) == EVR_OK);
  REQUIRE(evr_events_sort(ev) == EVR_OK);
  return ev;
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::strlen(evr_version()) > 0);
  CHECK(std::string(evr_status_name(EVR_OK)) == "ok");
  CHECK(std::string(evr_status_name(EVR_ERR_CONFIG)).size() > 0);
  evr_events* ev = nullptr;
  CHECK(evr_events_create(-1, 4, 0, 1, &ev) != EVR_OK);
  CHECK(ev == nullptr);
  CHECK(std::strlen(evr_last_error()) > 0);
  CHECK(evr_events_create(4, 4, 0, 1, nullptr) == EVR_ERR_PARAMETER);
}

TEST_CASE("events through the C API") {
  evr_events* ev = make_stream();
  int32_t w, h;
  double t0, t1;
  size_t n;
  REQUIRE(evr_events_info(ev, &w, &h, &t0, &t1, &n) == EVR_OK);
  CHECK(w == 8);
  CHECK(h == 6);
  CHECK(n == 4);
  evr_event e;
  REQUIRE(evr_events_get(ev, 0, &e) == EVR_OK);
  CHECK(e.t == 0.1);
  CHECK(e.polarity == -1);
  CHECK(evr_events_get(ev, 4, &e) == EVR_ERR_PARAMETER);

  Scratch dir("events");
  REQUIRE(evr_events_write(ev, (dir / "a.evst").c_str(), EVR_EVENTS_BINARY) == EVR_OK);
  REQUIRE(evr_events_write(ev, (dir / "a.txt").c_str(), EVR_EVENTS_TEXT) == EVR_OK);
  evr_events* back = nullptr;
  REQUIRE(evr_events_read((dir / "a.txt").c_str(), &back) == EVR_OK);
  REQUIRE(evr_events_info(back, &w, &h, &t0, &t1, &n) == EVR_OK);
  CHECK(n == 4);
  CHECK(t1 == 1.0);
  evr_events_free(back);

  {
    std::ofstream(dir / "junk.evst") << "EVST0001 but not really";
  }
  CHECK(evr_events_read((dir / "junk.evst").c_str(), &back) == EVR_ERR_FORMAT);
  CHECK(evr_events_read((dir / "none.evst").c_str(), &back) == EVR_ERR_IO);

  // Invalid event surfaces when used.
  const evr_event bad{9, 0, 0.5, 1};
  REQUIRE(evr_events_push(ev, &bad) == EVR_OK);
  CHECK(evr_events_write(ev, (dir / "b.evst").c_str(), EVR_EVENTS_BINARY) == EVR_ERR_FORMAT);
  evr_events_free(ev);
}

TEST_CASE("images, flows and metrics") {
  evr_image *a = nullptr, *b = nullptr;
  REQUIRE(evr_image_create(16, 12, &a) == EVR_OK);
  REQUIRE(evr_image_create(16, 12, &b) == EVR_OK);
  double* pa = evr_image_data(a);
  double* pb = evr_image_data(b);
  for (int i = 0; i < 16 * 12; ++i) {
    pa[i] = (i % 7) / 7.0;
    pb[i] = pa[i];
  }
  double v = -1;
  REQUIRE(evr_mse(a, b, &v) == EVR_OK);
  CHECK(v == 0.0);
  REQUIRE(evr_ssim(a, b, &v) == EVR_OK);
  CHECK(v == doctest::Approx(1.0));

  evr_flow *f = nullptr, *g = nullptr;
  REQUIRE(evr_flow_create(16, 12, &f) == EVR_OK);
  REQUIRE(evr_flow_create(16, 12, &g) == EVR_OK);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 16; ++x) REQUIRE(evr_flow_set(f, x, y, 3.0f, 4.0f) == EVR_OK);
  REQUIRE(evr_epe(f, g, &v) == EVR_OK);
  CHECK(v == 5.0);
  REQUIRE(evr_outlier_pct(f, g, &v) == EVR_OK);
  CHECK(v == 100.0);
  CHECK(evr_flow_set(f, 16, 0, 0, 0) == EVR_ERR_PARAMETER);

  evr_image* warped = nullptr;
  REQUIRE(evr_warp_frame(a, g, &warped) == EVR_OK);
  REQUIRE(evr_mse(a, warped, &v) == EVR_OK);
  CHECK(v == 0.0);
  evr_image_free(warped);

  Scratch dir("images");
  REQUIRE(evr_image_write(a, (dir / "a.png").c_str(), 16) == EVR_OK);
  REQUIRE(evr_flow_write(f, (dir / "f.flo").c_str()) == EVR_OK);
  CHECK(evr_image_write(a, (dir / "a.png").c_str(), 7) == EVR_ERR_FORMAT);
  evr_image* ra = nullptr;
  REQUIRE(evr_image_read((dir / "a.png").c_str(), &ra) == EVR_OK);
  REQUIRE(evr_mse(a, ra, &v) == EVR_OK);
  CHECK(v < 1e-9);
  evr_flow* rf = nullptr;
  REQUIRE(evr_flow_read((dir / "f.flo").c_str(), &rf) == EVR_OK);
  float u = 0, vv = 0;
  REQUIRE(evr_flow_get(rf, 3, 3, &u, &vv) == EVR_OK);
  CHECK(u == 3.0f);
  CHECK(vv == 4.0f);

  evr_image* small = nullptr;
  REQUIRE(evr_image_create(4, 4, &small) == EVR_OK);
  CHECK(evr_mse(a, small, &v) == EVR_ERR_DIMENSION);

  for (evr_image* i : {a, b, ra, small}) evr_image_free(i);
  for (evr_flow* x : {f, g, rf}) evr_flow_free(x);
}

TEST_CASE("event images, FWL and voxel files") {
  evr_events* ev = make_stream();
  evr_flow* zero = nullptr;
  REQUIRE(evr_flow_create(8, 6, &zero) == EVR_OK);
  double fwl = 0;
  REQUIRE(evr_fwl(ev, zero, 1.0, &fwl) == EVR_OK);
  CHECK(fwl == 1.0);
  evr_image* img = nullptr;
  REQUIRE(evr_event_image(ev, &img) == EVR_OK);
  CHECK(evr_image_cdata(img)[3 * 8 + 2] == -1.0);
  evr_image* disp = nullptr;
  REQUIRE(evr_image_signed_display(img, &disp) == EVR_OK);
  CHECK(evr_image_cdata(disp)[3 * 8 + 2] == 0.0);

  double starts[4], ends[4];
  size_t count = 0;
  REQUIRE(evr_step_windows(ev, 3, starts, ends, 4, &count) == EVR_OK);
  CHECK(count == 2);
  CHECK(starts[0] == 0.0);
  CHECK(ends[0] == 0.5);
  CHECK(starts[1] == 0.5);
  CHECK(ends[1] == 0.9);

  Scratch dir("voxels");
  size_t groups = 0;
  REQUIRE(evr_encode_voxels(ev, 3, 2, 0, dir.path.c_str(), &groups) == EVR_OK);
  CHECK(groups == 2);
  CHECK(fs::exists(dir / "voxel_0000.cwts"));
  CHECK(fs::exists(dir / "voxel_0001.cwts"));
  CHECK(evr_encode_voxels(ev, 0, 2, 0, dir.path.c_str(), &groups) == EVR_ERR_PARAMETER);

  evr_image_free(img);
  evr_image_free(disp);
  evr_flow_free(zero);
  evr_events_free(ev);
}

TEST_CASE("scene, simulation and reconstruction") {
  evr_scene* scene = nullptr;
  REQUIRE(evr_scene_random(32, 24, 0.3, 2, 7, &scene) == EVR_OK);
  char* json = nullptr;
  REQUIRE(evr_scene_to_json(scene, &json) == EVR_OK);
  evr_scene* copy = nullptr;
  REQUIRE(evr_scene_from_json(json, &copy) == EVR_OK);
  evr_string_free(json);
  CHECK(evr_scene_from_json("{\"width\": []}", &copy) != EVR_OK);

  evr_sim_params params;
  evr_sim_params_ideal(0.2, 7, &params);
  evr_events* ev = nullptr;
  REQUIRE(evr_simulate(scene, &params, &ev) == EVR_OK);
  size_t n = 0;
  REQUIRE(evr_events_info(ev, nullptr, nullptr, nullptr, nullptr, &n) == EVR_OK);
  REQUIRE(n > 100);

  evr_bridge_options bo;
  evr_bridge_options_default(&bo);
  CHECK(bo.bins == 5);
  evr_weights* w = nullptr;
  REQUIRE(evr_weights_bridge(&bo, &w) == EVR_OK);
  evr_arch arch;
  REQUIRE(evr_weights_arch(w, &arch) == EVR_OK);
  CHECK(arch.blocks == bo.blocks);
  bo.blocks = 0;
  evr_weights* none = nullptr;
  CHECK(evr_weights_bridge(&bo, &none) == EVR_ERR_PARAMETER);

  Scratch dir("recon");
  REQUIRE(evr_weights_save(w, (dir / "w.cwts").c_str()) == EVR_OK);
  evr_weights* loaded = nullptr;
  size_t ignored = 99;
  REQUIRE(evr_weights_load((dir / "w.cwts").c_str(), &loaded, &ignored) == EVR_OK);
  CHECK(ignored == 0);

  evr_provider* gt = nullptr;
  REQUIRE(evr_provider_ground_truth(copy, &gt) == EVR_OK);
  evr_run_config cfg;
  evr_run_config_default(&cfg);
  cfg.events_per_group = n / 3;
  evr_result* r = nullptr;
  REQUIRE(evr_reconstruct(ev, &cfg, gt, loaded, &r) == EVR_OK);
  const size_t frames = evr_result_frame_count(r);
  CHECK(frames >= 3);
  CHECK(evr_result_frame(r, frames) == nullptr);
  CHECK(evr_result_frame_time(r, frames - 1) > 0.0);
  REQUIRE(evr_result_write(r, (dir / "out").c_str(), 16, 1) == EVR_OK);
  CHECK(fs::exists(dir / "out/frame_0000.png"));
  CHECK(fs::exists(dir / "out/flow_0000.flo"));
  CHECK(fs::exists(dir / "out/timestamps.txt"));
  char* report = nullptr;
  REQUIRE(evr_result_report_json(r, "{\"bins\": 5}", &report) == EVR_OK);
  CHECK(std::string(report).find("\"config_echo\"") != std::string::npos);
  evr_string_free(report);
  CHECK(evr_result_report_json(r, "{not json", &report) == EVR_ERR_PARAMETER);

  // The written flows drive an external provider to the same frames.
  evr_provider* ext = nullptr;
  REQUIRE(evr_provider_external((dir / "out").c_str(), &ext) == EVR_OK);
  evr_result* r2 = nullptr;
  REQUIRE(evr_reconstruct(ev, &cfg, ext, loaded, &r2) == EVR_OK);
  REQUIRE(evr_result_frame_count(r2) == frames);
  for (size_t i = 0; i < frames; ++i) {
    double d = 1;
    REQUIRE(evr_mse(evr_result_frame(r, i), evr_result_frame(r2, i), &d) == EVR_OK);
    CHECK(d == 0.0);
  }

  evr_eval_options eo{};
  const std::string out_dir = dir / "out";
  eo.pred_dir = out_dir.c_str();
  eo.gt_dir = out_dir.c_str();
  eo.flow_pred_dir = out_dir.c_str();
  eo.flow_gt_dir = out_dir.c_str();
  eo.events = ev;
  eo.events_per_group = cfg.events_per_group;
  char* eval = nullptr;
  REQUIRE(evr_evaluate(&eo, nullptr, 0, &eval) == EVR_OK);
  CHECK(std::string(eval).find("\"epe\": 0.0") != std::string::npos);
  evr_string_free(eval);
  REQUIRE(evr_evaluate(&eo, nullptr, 1, &eval) == EVR_OK);
  CHECK(std::string(eval).rfind("index,", 0) == 0);
  evr_string_free(eval);

  cfg.bins = 3;
  evr_result* bad = nullptr;
  CHECK(evr_reconstruct(ev, &cfg, gt, loaded, &bad) == EVR_ERR_CONFIG);
  CHECK(bad == nullptr);

  evr_result_free(r);
  evr_result_free(r2);
  evr_provider_free(gt);
  evr_provider_free(ext);
  evr_weights_free(w);
  evr_weights_free(loaded);
  evr_events_free(ev);
  evr_scene_free(scene);
  evr_scene_free(copy);
}

TEST_CASE("configuration loading") {
  Scratch dir("config");
  {
    std::ofstream(dir / "c.toml") << "[reconstruct]\nbins = 3\n";
    std::ofstream(dir / "c.json") << "{\"reconstruct\": {\"bins\": 3}}";
    std::ofstream(dir / "bad.json") << "[]";
  }
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(evr_config_load((dir / "c.toml").c_str(), &a) == EVR_OK);
  REQUIRE(evr_config_load((dir / "c.json").c_str(), &b) == EVR_OK);
  CHECK(std::string(a) == std::string(b));
  evr_string_free(a);
  evr_string_free(b);
  CHECK(evr_config_load((dir / "bad.json").c_str(), &a) == EVR_ERR_CONFIG);
  CHECK(evr_config_load((dir / "none.toml").c_str(), &a) == EVR_ERR_CONFIG);
}
