#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>

#include "io/container.hpp"
#include "sparse/cista.hpp"
#include "sparse/cista_impl.hpp"
#include "sparse/ista.hpp"
#include "support.hpp"

using namespace evrecon;
using namespace evrecon::sparse;
using evrecon::testing::TempDir;

namespace dual {

// Forward-mode dual number: value plus one directional derivative.
struct Dual {
  double v = 0.0;
  double d = 0.0;
  Dual() = default;
  Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}
  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  bool operator==(const Dual&) const = default;
};
inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(const Dual& a, const Dual& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
inline Dual exp(const Dual& a) { const double e = std::exp(a.v); return {e, e * a.d}; }
inline Dual log1p(const Dual& a) { return {std::log1p(a.v), a.d / (1.0 + a.v)}; }
inline Dual tanh(const Dual& a) { const double t = std::tanh(a.v); return {t, (1.0 - t * t) * a.d}; }
inline double value_of(const Dual& a) { return a.v; }

}  // namespace dual

namespace {

Tensor random_tensor(int c, int h, int w, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Tensor t(c, h, w);
  for (double& v : t.values()) v = d(rng);
  return t;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  REQUIRE(a.same_shape(b));
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.values()[i] - b.values()[i]));
  return m;
}

// Feature stack with every channel equal to the frame, which is what the
// bridge's fusion produces from a frame and empty events.
Tensor replicate(const Image& frame, int features) {
  Tensor x(features, frame.height(), frame.width());
  for (int f = 0; f < features; ++f) {
    auto src = frame.pixels();
    std::copy(src.begin(), src.end(), x.plane(f).begin());
  }
  return x;
}

double oracle_gap(const DictionaryPair& dict, const CistaWeights& w, double lambda, double L, int blocks,
                  std::mt19937_64& rng) {
  const Image frame = evrecon::testing::random_image(16, 16, rng);
  const CistaArch& arch = w.arch();
  encode::VoxelGrid events{Tensor(arch.bins, 16, 16), 0.0, 1.0};
  const Tensor zero_codes(arch.codes, 8, 8);
  const ForwardResult net = cista_forward(events, frame, zero_codes, zero_state(arch, 16, 16), w);
  const IstaResult ref = ista_solve(replicate(frame, dict.features()), dict, lambda, L, blocks);
  const Tensor expected = synthesize_image(dict, ref.codes);
  CHECK(max_abs_diff(net.state.codes, ref.codes) <= 1e-6);
  return max_abs_diff(stack_image(net.frame_raw), expected);
}

}  // namespace

TEST_CASE("soft threshold") {
  Tensor v(2, 1, 3);
  v.values() = {-2.0, 0.5, 1.5, 0.1, -0.1, 3.0};
  const std::vector<double> theta{1.0, 0.0};
  const Tensor s = soft_threshold(v, theta);
  CHECK(s.values() == std::vector<double>{-1.0, 0.0, 0.5, 0.1, -0.1, 3.0});
  const std::vector<double> negative{-0.1, 0.0};
  CHECK_THROWS_AS(soft_threshold(v, negative), Error);
}

TEST_CASE("property: soft threshold is nonexpansive") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dth(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Tensor a = random_tensor(3, 4, 5, rng, -2, 2), b = random_tensor(3, 4, 5, rng, -2, 2);
    const std::vector<double> theta{dth(rng), dth(rng), dth(rng)};
    CHECK(max_abs_diff(soft_threshold(a, theta), soft_threshold(b, theta)) <= max_abs_diff(a, b) + 1e-15);
  }
}

TEST_CASE("synthesis and analysis are adjoint") {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DictionaryPair dict = random_dictionary(6, 2, 3, seed);
    const Tensor z = random_tensor(6, 5, 7, rng);
    const Tensor x = random_tensor(2, 10, 14, rng);
    const Tensor dz = synthesize_features(dict, z);
    const Tensor dtx = analyze_features(dict, x);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) lhs += dz.values()[i] * x.values()[i];
    for (std::size_t i = 0; i < z.size(); ++i) rhs += z.values()[i] * dtx.values()[i];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("power iteration bounds the operator norm") {
  const DictionaryPair dict = random_dictionary(8, 1, 3, 4);
  const double L = estimate_lipschitz(dict, 16, 16);
  CHECK(L > 0.0);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Tensor z = random_tensor(8, 8, 8, rng);
    const Tensor dz = synthesize_features(dict, z);
    double num = 0.0, den = 0.0;
    for (double v : dz.values()) num += v * v;
    for (double v : z.values()) den += v * v;
    CHECK(num / den <= L * 1.001);
  }
}

TEST_CASE("property: ISTA objective is nonincreasing") {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DictionaryPair dict = random_dictionary(8, 1, 3, seed);
    const double L = 1.01 * estimate_lipschitz(dict, 16, 16);
    const Tensor x = random_tensor(1, 16, 16, rng, 0.0, 1.0);
    const IstaResult r = ista_solve(x, dict, 0.05, L, 30, std::nullopt, true);
    REQUIRE(r.objective.size() == 31);
    for (std::size_t i = 1; i < r.objective.size(); ++i)
      CHECK(r.objective[i] <= r.objective[i - 1] + 1e-12 * std::fabs(r.objective[i - 1]));
    CHECK(r.objective.back() < r.objective.front());
    CHECK(lasso_objective(dict, x, r.codes, 0.05) == doctest::Approx(r.objective.back()).epsilon(1e-12));
  }
}

TEST_CASE("oracle equivalence: unfolded blocks reproduce ISTA") {
  std::mt19937_64 rng(123);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const DictionaryPair dict = random_dictionary(8, 1, 3, seed);
    const double L = 1.01 * estimate_lipschitz(dict, 16, 16);
    for (int blocks : {1, 3, 5}) {
      const CistaWeights w = init_weights_from_dict(dict, 0.02, L, blocks);
      CHECK(oracle_gap(dict, w, 0.02, L, blocks, rng) <= 1e-6);
    }
  }
  // Several feature channels.
  const DictionaryPair wide = random_dictionary(8, 3, 3, 99);
  const double L = 1.01 * estimate_lipschitz(wide, 16, 16);
  CHECK(oracle_gap(wide, init_weights_from_dict(wide, 0.02, L, 4), 0.02, L, 4, rng) <= 1e-6);
}

TEST_CASE("warm start begins ISTA from the incoming codes") {
  std::mt19937_64 rng(8);
  const DictionaryPair dict = random_dictionary(8, 1, 3, 3);
  const double L = 1.01 * estimate_lipschitz(dict, 16, 16);
  BridgeOptions opt;
  const CistaWeights w = init_weights_from_dict(dict, 0.02, L, 3, opt);
  const Image frame = evrecon::testing::random_image(16, 16, rng);
  const Tensor z0 = random_tensor(8, 8, 8, rng, -0.2, 0.2);
  encode::VoxelGrid events{Tensor(opt.bins, 16, 16), 0.0, 1.0};
  const ForwardResult net = cista_forward(events, frame, z0, zero_state(w.arch(), 16, 16), w);
  const IstaResult ref = ista_solve(replicate(frame, 1), dict, 0.02, L, 3, z0);
  CHECK(max_abs_diff(net.state.codes, ref.codes) <= 1e-6);
}

TEST_CASE("zero inputs are a fixed point of zero-bias weights") {
  CistaArch arch;
  arch.codes = 6;
  arch.features = 4;
  arch.blocks = 3;
  arch.lsrc_channels = 2;
  CistaWeights w = random_weights(arch, 5);
  for (const char* bias : {"fusion.bias", "lstc.bias", "lsrc.bias", "lsrc.gate_bias"})
    for (float& v : w.at(bias).data) v = 0.0f;
  encode::VoxelGrid events{Tensor(arch.bins, 8, 12), 0.0, 1.0};
  const ForwardResult r =
      cista_forward(events, Image(12, 8), Tensor(arch.codes, 4, 6), zero_state(arch, 8, 12), w);
  for (double v : r.state.codes.values()) CHECK(v == 0.0);
  for (double v : r.frame.pixels()) CHECK(v == 0.0);
  for (double v : r.state.a.values()) CHECK(v == 0.0);
}

TEST_CASE("forward pass checks shapes") {
  const CistaWeights w = bridge_weights(0.01, 2);
  encode::VoxelGrid events{Tensor(5, 8, 8), 0.0, 1.0};
  const CistaState s = zero_state(w.arch(), 8, 8);
  CHECK_THROWS_AS(cista_forward(events, Image(8, 6), Tensor(4, 4, 4), s, w), Error);
  encode::VoxelGrid odd{Tensor(5, 7, 8), 0.0, 1.0};
  CHECK_THROWS_AS(cista_forward(odd, Image(8, 7), Tensor(4, 4, 4), zero_state(w.arch(), 8, 8), w), Error);
  encode::VoxelGrid three{Tensor(3, 8, 8), 0.0, 1.0};
  CHECK_THROWS_AS(cista_forward(three, Image(8, 8), Tensor(4, 4, 4), s, w), Error);
  CHECK_THROWS_AS(cista_forward(events, Image(8, 8), Tensor(4, 2, 2), s, w), Error);
}

TEST_CASE("Jacobian of the smooth forward pass matches finite differences") {
  CistaArch arch;
  arch.bins = 3;
  arch.codes = 4;
  arch.features = 3;
  arch.blocks = 3;
  arch.lsrc_channels = 2;
  const CistaWeights w = random_weights(arch, 17, 0.5);
  ForwardOptions opt;
  opt.threshold = ThresholdMode::smooth;
  opt.smooth_sharpness = 20.0;

  std::mt19937_64 rng(6);
  const int H = 8, W = 10;
  const Tensor ev = random_tensor(arch.bins, H, W, rng);
  const Tensor fr = random_tensor(1, H, W, rng, 0.0, 1.0);
  const Tensor zc = random_tensor(arch.codes, H / 2, W / 2, rng, -0.5, 0.5);
  CistaState prev;
  prev.codes = Tensor(arch.codes, H / 2, W / 2);
  prev.c = random_tensor(arch.codes, H / 2, W / 2, rng, -0.5, 0.5);
  prev.a = random_tensor(arch.lsrc_channels, H, W, rng, -0.5, 0.5);
  const Tensor dev = random_tensor(arch.bins, H, W, rng);
  const Tensor dfr = random_tensor(1, H, W, rng);
  const Tensor dzc = random_tensor(arch.codes, H / 2, W / 2, rng);

  using dual::Dual;
  auto lift = [](const Tensor& v, const Tensor& d) {
    Tensor3<Dual> out(v.channels(), v.height(), v.width());
    for (std::size_t i = 0; i < v.size(); ++i) out.values()[i] = Dual(v.values()[i], d.values()[i]);
    return out;
  };
  auto lift0 = [&](const Tensor& v) { return lift(v, Tensor(v.channels(), v.height(), v.width())); };
  CistaStateT<Dual> dprev{lift0(prev.codes), lift0(prev.a), lift0(prev.c)};
  const auto jd = cista_forward_t<Dual>(lift(ev, dev), lift(fr, dfr), lift(zc, dzc), dprev, w, opt);

  auto eval = [&](double h) {
    auto shift = [h](const Tensor& v, const Tensor& d) {
      Tensor out = v;
      for (std::size_t i = 0; i < v.size(); ++i) out.values()[i] += h * d.values()[i];
      return out;
    };
    return cista_forward_t<double>(shift(ev, dev), shift(fr, dfr), shift(zc, dzc), prev, w, opt);
  };
  const double h = 1e-5;
  const auto plus = eval(h), minus = eval(-h);

  auto compare = [&](const Tensor3<Dual>& j, const Tensor& p, const Tensor& m) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const double fd = (p.values()[i] - m.values()[i]) / (2 * h);
      num += (fd - j.values()[i].d) * (fd - j.values()[i].d);
      den += j.values()[i].d * j.values()[i].d;
    }
    REQUIRE(den > 0.0);
    return std::sqrt(num / den);
  };
  CHECK(compare(jd.frame_raw, plus.frame_raw, minus.frame_raw) < 1e-4);
  CHECK(compare(jd.state.codes, plus.state.codes, minus.state.codes) < 1e-4);
  CHECK(compare(jd.state.a, plus.state.a, minus.state.a) < 1e-4);
  CHECK(compare(jd.state.c, plus.state.c, minus.state.c) < 1e-4);
  // The dual pass carries the same primal values.
  const auto primal = cista_forward_t<double>(ev, fr, zc, prev, w, opt);
  for (std::size_t i = 0; i < jd.frame_raw.size(); ++i)
    CHECK(jd.frame_raw.values()[i].v == doctest::Approx(primal.frame_raw.values()[i]).epsilon(1e-12));
}

TEST_CASE("weights round-trip through the container") {
  CistaArch arch;
  arch.codes = 5;
  arch.features = 3;
  arch.blocks = 2;
  const CistaWeights w = random_weights(arch, 3);
  TempDir dir("weights");
  save_weights(w, dir / "w.cwts");
  std::vector<std::string> warnings;
  CHECK(load_weights(dir / "w.cwts", &warnings) == w);
  CHECK(warnings.empty());

  // Extra tensor: warning, ignored.
  io::TensorContainer c = io::read_container(dir / "w.cwts");
  c.add_f32("future.tensor", {2}, {1.0f, 2.0f});
  io::write_container(c, dir / "extra.cwts");
  CHECK(load_weights(dir / "extra.cwts", &warnings) == w);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("future.tensor") != std::string::npos);

  // Flipped byte and truncation.
  auto bytes = io::encode_container(io::read_container(dir / "w.cwts"));
  bytes[bytes.size() / 3] ^= 0x10;
  {
    std::ofstream out(dir / "bad.cwts", std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(load_weights(dir / "bad.cwts"), Error);
  std::filesystem::resize_file(dir / "w.cwts", std::filesystem::file_size(dir / "w.cwts") - 3);
  CHECK_THROWS_AS(load_weights(dir / "w.cwts"), Error);
}

TEST_CASE("weight validation") {
  CistaArch arch;
  arch.blocks = 2;
  CistaWeights w = random_weights(arch, 1);
  auto tensors = w.tensors();
  tensors.erase("lsrc.dict");
  CHECK_THROWS_AS(CistaWeights::from_tensors(tensors), Error);

  tensors = w.tensors();
  tensors.at(ista_name(1, "theta")).data[0] = -0.5f;
  CHECK_THROWS_AS(CistaWeights::from_tensors(tensors), Error);

  tensors = w.tensors();
  tensors.at("fusion.bias").data[0] = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(CistaWeights::from_tensors(tensors), Error);

  tensors = w.tensors();
  tensors.at("lstc.wz").shape[1] += 1;
  CHECK_THROWS_AS(CistaWeights::from_tensors(tensors), Error);

  arch.blocks = 0;
  CHECK_THROWS_AS(arch.validate(), Error);
}

TEST_CASE("bridge weights reload and still match the oracle") {
  const DictionaryPair dict = random_dictionary(8, 1, 3, 42);
  const double L = 1.01 * estimate_lipschitz(dict, 16, 16);
  const CistaWeights w = init_weights_from_dict(dict, 0.03, L, 5);
  TempDir dir("bridge");
  save_weights(w, dir / "b.cwts");
  std::mt19937_64 rng(0);
  CHECK(oracle_gap(dict, load_weights(dir / "b.cwts"), 0.03, L, 5, rng) <= 1e-6);
}
