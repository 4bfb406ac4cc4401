#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "evfilt/hw_model.hpp"
#include "evfilt/noise.hpp"
#include "evfilt/scene.hpp"

using namespace evfilt;
using boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace {

cpp_int big(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  cpp_int out = static_cast<std::uint64_t>(m >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(m);
  return neg ? cpp_int(-out) : out;
}

EventStream mixed_scene(double rate, std::uint64_t seed) {
  SceneConfig sc;
  sc.width = 128;
  sc.height = 96;
  sc.duration_us = 300'000;
  NoiseConfig nc;
  nc.width = sc.width;
  nc.height = sc.height;
  nc.duration_us = sc.duration_us;
  nc.rate_hz = rate;
  nc.seed = seed;
  return merge_streams(generate_moving_bars(sc), generate_noise(nc));
}

}  // namespace

TEST_CASE("distance quantization rounds to the nearest quarter pixel") {
  CHECK(quantize_distance(0.5, 0.5, 2) == 3);
  CHECK(quantize_distance(3, 4, 2) == 20);
  CHECK(quantize_distance(15.5, 15.5, 2) == 88);
  CHECK(quantize_distance(0, 0, 2) == 1);  // never zero

  const DistanceLut lut(16, 2);
  CHECK(lut.at(7, 7)[s22] == 3);
  CHECK(lut.at(7, 7)[s11] == 88);
  CHECK(lut.at(8, 8)[s11] == 3);
  CHECK(lut.at(0, 0)[s22] == quantize_distance(7.5, 7.5, 2));
}

TEST_CASE("K products truncate and saturate") {
  CHECK(hw_k(1000, 9, 8, 12) == 35);
  CHECK(hw_k(0, 9, 8, 12) == 1);
  CHECK(hw_k((1u << 24) - 1, 88, 8, 12) == 4095);
  CHECK(hw_k((1u << 24) - 1, 88, 8, 11) == 2047);
  CHECK(hw_k((1u << 24) - 1, 88, 8, 13) == 8191);
  HwParams p;
  CHECK(hw_k(1000, 9, p) == 35);
}

TEST_CASE("two's-complement wrap of differences") {
  CHECK(wrap_signed(5, 24) == 5);
  CHECK(wrap_signed(-5, 24) == -5);
  CHECK(wrap_signed((1 << 23) - 1, 24) == (1 << 23) - 1);
  CHECK(wrap_signed(1 << 23, 24) == -(1 << 23));
  CHECK(wrap_signed((1 << 24) + 7, 24) == 7);
}

TEST_CASE("integer decision examples") {
  const std::array<std::uint64_t, 4> equal{35, 35, 35, 35};
  const HwTrace zero = hw_decide({0, 0, 0, 0}, equal, 200);
  CHECK(zero.dt_c == 0);
  CHECK(zero.f_c > 0);
  CHECK(zero.pass);

  // Mean of (100,100,300,300) is 200: dt_c equals f_c, strict comparison rejects.
  const HwTrace tie = hw_decide({100, 100, 300, 300}, equal, 200);
  CHECK(tie.dt_c == tie.f_c);
  CHECK_FALSE(tie.pass);
  CHECK(tie.multiplications == 11);
  CHECK(tie.kd1 == 35u * 35u);
  CHECK(tie.d[s11] == i128{35} * 35 * 35);

  const HwTrace ones = hw_decide({10, 20, 30, 40}, {1, 1, 1, 1}, 30);
  CHECK(ones.dt_c == 100);
  CHECK(ones.f_c == 120);
  CHECK(ones.pass);
}

TEST_CASE("factored D products equal the plain triple products") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    std::array<std::uint64_t, 4> k;
    for (auto& v : k) v = 1 + rng() % 8191;
    const HwTrace tr = hw_decide({1, 2, 3, 4}, k, 10);
    CHECK(tr.d[s11] == i128(k[s12]) * k[s21] * k[s22]);
    CHECK(tr.d[s12] == i128(k[s11]) * k[s21] * k[s22]);
    CHECK(tr.d[s21] == i128(k[s11]) * k[s12] * k[s22]);
    CHECK(tr.d[s22] == i128(k[s11]) * k[s12] * k[s21]);
  }
}

TEST_CASE("shift IIR update") {
  const HwParams p;
  HwAreaState s{1000, 400};
  s = hw_update_area(s, 2000, 2, p);
  CHECK(s.ts == 1250);
  CHECK(s.iv == 550);

  const HwAreaState fixed = hw_update_area({5000, 400}, 5000, 2, p);
  CHECK(fixed.ts == 5000);
  CHECK(fixed.iv == 400 - (400 >> 2));

  // (Ts_e - ts) - iv = 3: floor(3 / 4) leaves iv in the dead band.
  const HwAreaState dead = hw_update_area({1000, 97}, 1100, 2, p);
  CHECK(dead.iv == 97);
  // Negative increments floor toward minus infinity.
  CHECK(hw_update_area({1000, 103}, 1100, 2, p).iv == 102);

  // Saturation at the interval width and wrap of the stored timestamp.
  HwParams narrow = p;
  narrow.iv_bits = 10;
  CHECK(hw_update_area({0, 1000}, 100'000, 0, narrow).iv == 1023);
  const HwAreaState wrapped = hw_update_area({0xFFFFFF00u, 10}, (std::int64_t{1} << 32) + 0x100, 0, p);
  CHECK(wrapped.ts == 0x100);
  CHECK(wrapped.iv == 0x200);
}

TEST_CASE("configuration ranges") {
  HwParams p;
  CHECK_NOTHROW(p.validate());
  p.trunc_bits = 6;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = HwParams{};
  p.k_sat_bits = 14;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = HwParams{};
  p.dt_bits = 16;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("without truncation or saturation the datapath matches exact DIF") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> dt_d(-(1 << 20), 1 << 20);
  std::uniform_int_distribution<std::uint64_t> iv_d(0, (1u << 24) - 1);
  std::uniform_int_distribution<std::uint32_t> d_d(1, 90);
  for (int i = 0; i < 5000; ++i) {
    std::array<std::int64_t, 4> dt;
    std::array<std::uint64_t, 4> k;
    Quad<Rational> rdt, riv, rd;
    for (int j = 0; j < 4; ++j) {
      dt[j] = dt_d(rng);
      const std::uint64_t iv = iv_d(rng);
      const std::uint32_t dq = d_d(rng);
      k[j] = hw_k(iv, dq, 0, 62);
      rdt[j] = dt[j];
      // K is floored at 1, so a zero interval weighs like I * d_q = 1.
      riv[j] = iv == 0 ? 1 : iv;
      rd[j] = iv == 0 ? 1 : dq;
    }
    const Rational exact = dif_score<Rational>(rdt, riv, rd);
    const std::int64_t fl = static_cast<std::int64_t>(rng() % 100'000);
    const HwTrace tr = hw_decide(dt, k, fl);
    CHECK(tr.pass == (exact < fl));
  }
}

TEST_CASE("emitted scores reproduce the decision at every filter length") {
  const EventStream s = mixed_scene(2.0, 4);
  for (std::int64_t fl : {20, 200, 1000, 20'000}) {
    FilterConfig cfg;
    cfg.filter_length_us = fl;
    HwFilter f(s.width, s.height, cfg, HwParams{});
    for (const Event& e : s.events) {
      HwTrace tr;
      const ScoredEvent out = f.process(e, &tr);
      REQUIRE(tr.d_sum > 0);
      const Rational score(big(tr.dt_c), big(tr.d_sum));
      REQUIRE(out.pass == (score < fl));
      REQUIRE(out.pass == tr.pass);
      if (std::abs(out.score - static_cast<double>(fl)) > 1e-6 * std::abs(static_cast<double>(fl))) {
        REQUIRE(out.pass == (out.score < static_cast<double>(fl)));
      }
    }
  }
}

TEST_CASE("cold start rejects like the float filter") {
  const EventStream first{64, 64, {{1'000'000, 20, 20, 1}}};
  FilterConfig cfg;
  CHECK_FALSE(hw_filter_stream(first, cfg, HwParams{})[0].pass);
  cfg.global_update_period_us = 0;
  CHECK_FALSE(hw_filter_stream(first, cfg, HwParams{})[0].pass);
  CHECK(hw_filter_stream(first, cfg, HwParams{})[0].score == doctest::Approx(1e6));
}

TEST_CASE("integer and float filters agree on most decisions") {
  const EventStream s = mixed_scene(1.0, 8);
  const auto hw = hw_filter_stream(s, FilterConfig{}, HwParams{});
  const auto fl = filter_stream(s, FilterConfig{}, Algo::dif);
  std::size_t same = 0;
  for (std::size_t i = 0; i < s.size(); ++i) same += hw[i].pass == fl[i].pass;
  CHECK(static_cast<double>(same) / static_cast<double>(s.size()) > 0.97);
}
