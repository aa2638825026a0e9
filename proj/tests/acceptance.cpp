// Desk-scale acceptance checks. One line per criterion; exit status is the
// number of failed criteria. `acceptance N` runs criterion N alone.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "encode/voxel.hpp"
#include "eventsim/scene.hpp"
#include "eventsim/simulator.hpp"
#include "metrics/metrics.hpp"
#include "pipeline/provider.hpp"
#include "pipeline/run.hpp"
#include "sparse/cista.hpp"
#include "sparse/ista.hpp"
#include "warp/warp.hpp"

using namespace evrecon;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

EventStream random_stream(int w, int h, std::size_t n, std::mt19937_64& rng) {
  EventStream s;
  s.width = w;
  s.height = h;
  s.t_start = 0.0;
  s.t_end = 1.0;
  std::uniform_int_distribution<int> dx(0, w - 1), dy(0, h - 1), dp(0, 1);
  std::uniform_real_distribution<double> dt(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) s.events.push_back({dx(rng), dy(rng), dt(rng), dp(rng) ? 1 : -1});
  s.sort();
  return s;
}

Image random_image(int w, int h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  Image img(w, h);
  for (double& v : img.pixels()) v = d(rng);
  return img;
}

Outcome voxel_conservation() {
  Outcome o;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> dn(0, 10000), dsize(1, 64), dbins(1, 10);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const EventStream s = random_stream(dsize(rng), dsize(rng), static_cast<std::size_t>(dn(rng)), rng);
    const auto g = encode::build_voxel_grid(s, dbins(rng), s.t_start, s.t_end);
    double mass = 0.0;
    for (double v : g.data.values()) mass += v;
    long signed_sum = 0;
    for (const Event& e : s.events) signed_sum += e.polarity;
    worst = std::max(worst, std::fabs(mass - static_cast<double>(signed_sum)));
  }
  o.pass = worst <= 1e-6;

  // Single events with B = 5 over [0, 1]: bin coordinate 4t.
  struct Case {
    double t;
    int lo;
    double w_lo;
  };
  bool exact = true;
  for (const Case& c : {Case{0.0, 0, 1.0}, Case{1.0, 4, 1.0}, Case{0.5, 2, 1.0}, Case{0.3125, 1, 0.75},
                        Case{0.8125, 3, 0.75}}) {
    EventStream s;
    s.width = s.height = 1;
    s.t_end = 1.0;
    s.events.push_back({0, 0, c.t, 1});
    const auto g = encode::build_voxel_grid(s, 5, 0.0, 1.0);
    exact &= g.data(c.lo, 0, 0) == c.w_lo;
    if (c.w_lo < 1.0) exact &= g.data(c.lo + 1, 0, 0) == 1.0 - c.w_lo;
  }
  o.pass &= exact;
  o.detail = fmt("1000 streams, max |mass - signed count| = %.3g; single-event splits %s", worst,
                 exact ? "exact" : "NOT exact");
  return o;
}

Outcome warp_identity_shift() {
  Outcome o;
  std::mt19937_64 rng(2);
  int identical = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 8 + trial % 40, h = 6 + trial % 30;
    const Image img = random_image(w, h, rng);
    const FlowField zero(w, h);
    Tensor codes = stack_image(img);
    identical += warp::forward_warp_frame(img, zero) == img && warp::forward_warp_codes(codes, zero) == codes;
  }
  int shifts = 0, shift_ok = 0;
  for (int dy = -3; dy <= 3; ++dy)
    for (int dx = -3; dx <= 3; ++dx) {
      const Image img = random_image(32, 24, rng);
      const Image out = warp::forward_warp_frame(img, FlowField(32, 24, static_cast<float>(dx), static_cast<float>(dy)));
      bool ok = true;
      for (int y = 3; y < 21; ++y)
        for (int x = 3; x < 29; ++x) ok &= out(x + dx, y + dy) == img(x, y);
      ++shifts;
      shift_ok += ok;
    }
  o.pass = identical == 100 && shift_ok == shifts;
  o.detail = fmt("zero flow bit-identical on %d/100 frames; integer shifts exact on %d/%d", identical, shift_ok,
                 shifts);
  return o;
}

Outcome fwl_calibration() {
  Outcome o;
  std::mt19937_64 rng(3);
  double worst_unit = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const EventStream s = random_stream(20, 16, 300, rng);
    worst_unit = std::max(worst_unit, std::fabs(warp::fwl(s, FlowField(20, 16), s.t_end) - 1.0));
  }
  std::uniform_real_distribution<double> speed(40.0, 120.0), angle(0.0, 2.0 * M_PI);
  const sim::TextureKind kinds[] = {sim::TextureKind::checker, sim::TextureKind::value_noise,
                                    sim::TextureKind::bars};
  int ordered = 0;
  double min_full = 1e300;
  const int sequences = 12;
  for (int i = 0; i < sequences; ++i) {
    sim::SceneConfig c;
    c.width = 48;
    c.height = 40;
    c.duration = 0.1;
    const double v = speed(rng), a = angle(rng);
    c.background.texture = {kinds[i % 3], static_cast<std::uint64_t>(i), 6.0 + i % 4, {}};
    c.background.pose = {24, 20, 0.3 * i, 1};
    c.background.velocity = {v * std::cos(a), v * std::sin(a), 0, 0};
    const sim::Scene scene(c);
    const auto seq = sim::render_sequence(scene);
    const EventStream ev = sim::emit_events(seq.frames, seq.times, sim::ideal_params(0.2, i));
    const FlowField gt = sim::ground_truth_flow(scene, ev.t_start, ev.t_end);
    const double zero = warp::fwl(ev, FlowField(c.width, c.height), ev.t_end);
    const double half = warp::fwl(ev, gt.scaled(0.5), ev.t_end);
    const double full = warp::fwl(ev, gt, ev.t_end);
    min_full = std::min(min_full, full);
    ordered += full >= 1.1 && full > half && half > zero;
  }
  o.pass = worst_unit <= 1e-9 && ordered == sequences;
  o.detail = fmt("|FWL(E,0) - 1| <= %.3g; %d/%d translation sequences ordered, min FWL(E,F_gt) = %.3f",
                 worst_unit, ordered, sequences, min_full);
  return o;
}

Outcome ista_oracle() {
  Outcome o;
  std::mt19937_64 rng(4);
  double worst = 0.0;
  bool monotone = true;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto dict = sparse::random_dictionary(8, 1, 3, seed);
    const double L = 1.01 * sparse::estimate_lipschitz(dict, 16, 16);
    const Image frame = random_image(16, 16, rng);
    const Tensor x = stack_image(frame);
    for (int blocks : {1, 3, 5}) {
      const auto w = sparse::init_weights_from_dict(dict, 0.02, L, blocks);
      const encode::VoxelGrid empty{Tensor(w.arch().bins, 16, 16), 0.0, 1.0};
      const auto net = sparse::cista_forward(empty, frame, Tensor(8, 8, 8), sparse::zero_state(w.arch(), 16, 16), w);
      const auto ref = sparse::ista_solve(x, dict, 0.02, L, blocks, std::nullopt, true);
      const Tensor expected = sparse::synthesize_image(dict, ref.codes);
      for (std::size_t i = 0; i < expected.size(); ++i)
        worst = std::max(worst, std::fabs(net.frame_raw.pixels()[i] - expected.values()[i]));
      for (std::size_t i = 1; i < ref.objective.size(); ++i)
        monotone &= ref.objective[i] <= ref.objective[i - 1] + 1e-12 * std::fabs(ref.objective[i - 1]);
    }
  }
  o.pass = worst <= 1e-6 && monotone;
  o.detail = fmt("50 dictionaries x K in {1,3,5}: max |net - D_I ISTA| = %.3g; objective %s", worst,
                 monotone ? "nonincreasing" : "INCREASED");
  return o;
}

Outcome crossing_count() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d_delta(0.1, 4.0), d_c(0.05, 1.0);
  int matched = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const double delta = d_delta(rng), c = d_c(rng);
    std::vector<Image> frames;
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) {
      frames.emplace_back(1, 1, sim::inverse_lin_log(1.5 + delta * i / 10.0));
      times.push_back(0.01 * i);
    }
    const auto ev = sim::emit_events(frames, times, sim::ideal_params(c, static_cast<std::uint64_t>(trial)));
    const long expected = static_cast<long>(std::floor(delta / c));
    matched += std::labs(static_cast<long>(ev.size()) - expected) <= 1;
  }
  sim::SimParams quiet;
  quiet.leak_rate_hz = 0.0;
  quiet.shot_noise_hz = 0.0;
  std::size_t constant_events = 0;
  for (double level : {0.0, 0.3, 1.0}) {
    std::vector<Image> frames(6, Image(16, 12, level));
    std::vector<double> times{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    constant_events += sim::emit_events(frames, times, quiet).size();
  }
  o.pass = matched == 20 && constant_events == 0;
  o.detail = fmt("%d/20 ramps within floor(delta/C) +- 1; constant scenes emitted %zu events", matched,
                 constant_events);
  return o;
}

Outcome metric_identities() {
  Outcome o;
  const FlowField gt(10, 10, 10.0f, 0.0f);
  const double e = metrics::epe(FlowField(10, 10, 13.0f, 4.0f), gt);
  const double o_same = metrics::outlier_pct(gt, gt);
  const double o_four = metrics::outlier_pct(FlowField(10, 10, 14.0f, 0.0f), gt);
  const double o_two = metrics::outlier_pct(FlowField(10, 10, 12.0f, 0.0f), gt);
  std::mt19937_64 rng(6);
  const Image a = random_image(16, 16, rng);
  const Image m = metrics::m_weight(a, a, 50.0);
  const bool ones = std::all_of(m.pixels().begin(), m.pixels().end(), [](double v) { return v == 1.0; });
  const FlowField flow(16, 16, 2.0f, -1.0f);
  const Image warped = warp::forward_warp_frame(a, flow);
  const double tc = metrics::temporal_consistency_loss(a, warped, flow, Image(16, 16, 1.0));
  const auto w = metrics::iteration_weights(3, 0.8);
  const bool weights_ok = w.size() == 3 && std::fabs(w[0] - 0.8) < 1e-15 && w[1] == 1.0 &&
                          std::fabs(w[2] - 1.25) < 1e-15;
  o.pass = e == 5.0 && o_same == 0.0 && o_four == 100.0 && o_two == 0.0 && ones && tc == 0.0 && weights_ok;
  o.detail = fmt("EPE=%.17g; Out%% = %g/%g/%g; M(0)=1 %s; TC(perfect)=%g; w=[%g, %g, %g]", e, o_same, o_four,
                 o_two, ones ? "yes" : "no", tc, w[0], w[1], w[2]);
  return o;
}

Outcome ablation_order() {
  Outcome o;
  const pipeline::WarpMode modes[3] = {pipeline::WarpMode::none, pipeline::WarpMode::frame,
                                       pipeline::WarpMode::frame_and_codes};
  const auto weights = sparse::bridge_weights(0.01, 5);
  double sums[3] = {0.0, 0.0, 0.0};
  const int sequences = 5;
  for (int s = 0; s < sequences; ++s) {
    const auto cfg = sim::random_scene(64, 64, 0.5, 2, 100 + static_cast<std::uint64_t>(s));
    const sim::Scene scene(cfg);
    const auto seq = sim::render_sequence(scene);
    const auto ev = sim::emit_events(seq.frames, seq.times, sim::ideal_params(0.2, static_cast<std::uint64_t>(s)));
    for (int m = 0; m < 3; ++m) {
      pipeline::RunConfig rc;
      rc.events_per_group = 2000;
      rc.warp = modes[m];
      pipeline::GroundTruthFlowProvider gt(cfg);
      const auto r = pipeline::run_reconstruction(ev, rc, gt, weights);
      double acc = 0.0;
      for (std::size_t i = 0; i < r.frames.size(); ++i)
        acc += metrics::mse(r.frames[i], scene.render(r.frame_times[i]));
      sums[m] += acc / static_cast<double>(r.frames.size());
    }
  }
  const double none = sums[0] / sequences, frame = sums[1] / sequences, both = sums[2] / sequences;
  // Positive margin: the left-hand mode has the lower MSE.
  const double m_codes = (frame - both) / frame;
  const double m_frame = (none - frame) / none;
  auto verdict = [](double margin) {
    if (margin >= 0.01) return "better";
    if (margin > -0.01) return "tie";
    return "WORSE";
  };
  o.pass = m_codes > -0.01 && m_frame > -0.01;
  o.detail = fmt("mean MSE none=%.5f frame=%.5f frame+codes=%.5f; I+Z vs I: %+.2f%% (%s), I vs none: %+.2f%% (%s)",
                 none, frame, both, 100 * m_codes, verdict(m_codes), 100 * m_frame, verdict(m_frame));
  return o;
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool run_cli(const fs::path& dir) {
  const std::string cli = EVRECON_CLI_PATH;
  const std::string d = dir.string();
  const std::string quiet = " > /dev/null 2>&1";
  const std::string cmds[] = {
      cli + " --seed 42 simulate --width 48 --height 32 --duration 0.3 --objects 2 --n-events 1500 --out-events " +
          d + "/events.evst --out-frames-dir " + d + "/gt --out-flow-dir " + d + "/gt --out-scene " + d +
          "/scene.json",
      cli + " --seed 42 encode --events " + d + "/events.evst --bins 5 --n-events 1500 --out-dir " + d + "/voxels",
      cli + " --seed 42 reconstruct --events " + d + "/events.evst --flow gt --scene " + d +
          "/scene.json --n-events 1500 --write-flows --out " + d + "/recon",
      cli + " --seed 42 evaluate --pred-dir " + d + "/recon --gt-dir " + d + "/gt --flow-pred-dir " + d +
          "/recon --flow-gt-dir " + d + "/gt --events " + d + "/events.evst --n-events 1500 --report " + d +
          "/eval.json",
  };
  for (const auto& c : cmds)
    if (std::system((c + quiet).c_str()) != 0) {
      std::fprintf(stderr, "command failed: %s\n", c.c_str());
      return false;
    }
  return true;
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / ("evrecon_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const fs::path a = root / "a", b = root / "b";
  fs::create_directories(a);
  fs::create_directories(b);
  if (!run_cli(a) || !run_cli(b)) {
    o.pass = false;
    o.detail = "CLI pipeline failed";
    fs::remove_all(root);
    return o;
  }
  std::size_t files = 0, differ = 0, flo = 0, frames = 0, reports = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    ++files;
    const auto ext = rel.extension();
    flo += ext == ".flo";
    frames += ext == ".png" || ext == ".pgm";
    reports += ext == ".json" && rel.filename() != "scene.json";
    if (!fs::exists(b / rel) || slurp(entry.path()) != slurp(b / rel)) ++differ;
  }
  std::size_t files_b = 0;
  for (const auto& entry : fs::recursive_directory_iterator(b)) files_b += entry.is_regular_file();
  fs::remove_all(root);
  o.pass = differ == 0 && files == files_b && flo > 0 && frames > 0 && reports >= 2;
  o.detail = fmt("two seeded runs: %zu files (%zu .flo, %zu frames, %zu reports), %zu differ", files, flo, frames,
                 reports, differ);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "voxel conservation", 5.0, voxel_conservation},
      {2, "warp identity & shift", 5.0, warp_identity_shift},
      {3, "FWL calibration", 30.0, fwl_calibration},
      {4, "ISTA oracle equivalence", 60.0, ista_oracle},
      {5, "simulator crossing count", 5.0, crossing_count},
      {6, "metric identities", 1.0, metric_identities},
      {7, "ablation direction", 300.0, ablation_order},
      {8, "determinism & formats", 120.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool ok = o.pass && in_time;
    failed += !ok;
    std::printf("[%s] criterion %d %s: %s (%.2f s, limit %.0f s%s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", TOO SLOW");
    std::fflush(stdout);
  }
  return failed;
}
