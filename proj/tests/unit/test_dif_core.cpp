#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "evfilt/dif_core.hpp"
#include "evfilt/noise.hpp"
#include "evfilt/scene.hpp"

using namespace evfilt;
using Rational = boost::multiprecision::cpp_rational;

namespace {

FilterConfig no_global(FilterConfig cfg = {}) {
  cfg.global_update_period_us = 0;
  return cfg;
}

EventStream test_scene(std::uint64_t noise_seed = 3) {
  SceneConfig sc;
  sc.width = 96;
  sc.height = 64;
  sc.duration_us = 200'000;
  EventStream clean = generate_moving_bars(sc);
  NoiseConfig nc;
  nc.width = sc.width;
  nc.height = sc.height;
  nc.rate_hz = 2;
  nc.duration_us = sc.duration_us;
  nc.seed = noise_seed;
  return merge_streams(clean, generate_noise(nc));
}

}  // namespace

TEST_CASE("one-area corner: every slot is area 0") {
  const AreaLayout layout(16, 16, 16);
  const NeighborSlots n = layout.neighbors(7, 7);
  for (std::uint32_t a : n.area) CHECK(a == 0);
  CHECK(n.own_area == 0);
}

TEST_CASE("centre arithmetic at offset 7 of a 16-pixel area") {
  const AreaLayout layout(64, 64, 16);
  const NeighborSlots n = layout.neighbors(16 + 7, 16 + 7);
  // 7 < 7.5 so the event is in the left/upper half; own area sits in slot 22.
  CHECK(n.own_slot == s22);
  CHECK(n.area[s22] == n.own_area);
  CHECK(n.dx2_h == 1);   // 0.5 to own centre
  CHECK(n.dx1_h == 31);  // 15.5 to the bracketing neighbour
  CHECK(n.dx1_h + n.dx2_h == 2 * 16);
  CHECK(n.dy1_h + n.dy2_h == 2 * 16);

  AreaGrid grid(64, 64, FilterConfig{});
  const NeighborContext ctx = neighbor_context(grid, 16 + 7, 16 + 7);
  CHECK(ctx.dist[s22] == doctest::Approx(std::sqrt(0.5)));
  CHECK(ctx.dist[s22] == doctest::Approx(0.70710678).epsilon(1e-7));
  CHECK(ctx.dist[s11] == doctest::Approx(std::hypot(15.5, 15.5)));

  const NeighborSlots r = layout.neighbors(16 + 8, 16 + 8);
  CHECK(r.own_slot == s11);
  CHECK(r.dx1_h == 1);
  CHECK(r.dx2_h == 31);
}

TEST_CASE("border areas are duplicated into missing slots") {
  const AreaLayout layout(64, 48, 16);
  const NeighborSlots n = layout.neighbors(0, 0);
  CHECK(n.area[s11] == 0);
  CHECK(n.area[s12] == 0);
  CHECK(n.area[s21] == 0);
  CHECK(n.area[s22] == 0);
  const NeighborSlots m = layout.neighbors(63, 47);
  const std::uint32_t last = layout.areas() - 1;
  for (std::uint32_t a : m.area) CHECK(a == last);
}

TEST_CASE("area IIR update") {
  AreaGrid grid(16, 16, FilterConfig{});
  grid.ts[0] = 1000;
  grid.iv[0] = 400;
  update_area(grid, 0, 2000, 0.25);
  CHECK(grid.ts[0] == 1250);
  CHECK(grid.iv[0] == 550);
  CHECK(grid.active[0] == 1);

  grid.ts[0] = 3000;
  grid.iv[0] = 800;
  update_area(grid, 0, 3000, 0.25);
  CHECK(grid.ts[0] == 3000);
  CHECK(grid.iv[0] == 600);

  grid.ts[0] = 100;
  grid.iv[0] = 77;
  update_area(grid, 0, 5000, 1.0);
  CHECK(grid.ts[0] == 5000);
  CHECK(grid.iv[0] == 4900);
}

TEST_CASE("dif score examples") {
  const Quad<double> one{1, 1, 1, 1};
  CHECK(dif_score<double>({0, 0, 0, 0}, {3, 5, 7, 9}, {1, 2, 3, 4}) == 0);
  CHECK(dif_score<double>({250, 250, 250, 250}, {3, 5, 7, 9}, {1, 2, 3, 4}) == doctest::Approx(250));

  const Quad<Rational> dt{100, 100, 300, 300}, iv{1, 1, 3, 3}, d{1, 1, 1, 1};
  // (100 + 100 + 100 + 100) / (1 + 1 + 1/3 + 1/3)
  CHECK(dif_score<Rational>(dt, iv, d) == Rational(150));
  CHECK(dif_score<double>({100, 100, 300, 300}, {1, 1, 3, 3}, one) == doctest::Approx(150));
}

TEST_CASE("bif score examples") {
  CHECK(bif_score<double>({0, 0, 0, 0}, {2, 3, 4, 5}, 1, 2, 3, 4) == 0);
  // Uniform I and equal distances: plain bilinear average.
  CHECK(bif_score<double>({10, 20, 30, 40}, {7, 7, 7, 7}, 8, 8, 8, 8) == doctest::Approx(25));
  // Uniform I reduces to textbook bilinear interpolation.
  const double dx1 = 3, dx2 = 13, dy1 = 5, dy2 = 11;
  const double top = (10 * dx2 + 20 * dx1) / 16, bot = (30 * dx2 + 40 * dx1) / 16;
  CHECK(bif_score<double>({10, 20, 30, 40}, {9, 9, 9, 9}, dx1, dx2, dy1, dy2) ==
        doctest::Approx((top * dy2 + bot * dy1) / 16));
}

TEST_CASE("division-free decisions match exact thresholding") {
  const Quad<Rational> dt{100, 100, 300, 300}, iv{1, 1, 3, 3}, d{1, 1, 1, 1};
  CHECK(dif_decide_division_free<Rational>(dt, iv, d, Rational(200)).pass);
  CHECK_FALSE(dif_decide_division_free<Rational>(dt, iv, d, Rational(150)).pass);  // exactly F_L
  CHECK(dif_decide_division_free<Rational>(dt, iv, d, Rational(151)).pass);
  CHECK(dif_decide_division_free<Rational>({0, 0, 0, 0}, iv, d, Rational(1)).pass);

  CHECK(bif_decide_division_free<Rational>({0, 0, 0, 0}, iv, 1, 2, 3, 4, Rational(1)).pass);
  const Quad<Rational> bdt{10, 20, 30, 40};
  const Rational exact = bif_score<Rational>(bdt, {7, 7, 7, 7}, 8, 8, 8, 8);
  CHECK(exact == Rational(25));
  CHECK_FALSE(bif_decide_division_free<Rational>(bdt, {7, 7, 7, 7}, 8, 8, 8, 8, exact).pass);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dt_d(-2000, 50'000), iv_d(1, 1 << 24), dist_d(1, 100);
  for (int i = 0; i < 2000; ++i) {
    Quad<Rational> qdt, qiv, qd;
    for (int k = 0; k < 4; ++k) {
      qdt[k] = dt_d(rng);
      qiv[k] = iv_d(rng);
      qd[k] = Rational(dist_d(rng), 4);
    }
    const Rational fl = dt_d(rng) < 25'000 ? Rational(dist_d(rng) * 100) : dif_score<Rational>(qdt, qiv, qd);
    CHECK(dif_decide_division_free<Rational>(qdt, qiv, qd, fl).pass == (dif_score<Rational>(qdt, qiv, qd) < fl));
    const Rational bfl = bif_score<Rational>(qdt, qiv, qd[0], qd[1], qd[2], qd[3]);
    CHECK_FALSE(bif_decide_division_free<Rational>(qdt, qiv, qd[0], qd[1], qd[2], qd[3], bfl).pass);
    CHECK(bif_decide_division_free<Rational>(qdt, qiv, qd[0], qd[1], qd[2], qd[3], bfl + Rational(1, 8)).pass);
  }
}

TEST_CASE("global update") {
  AreaGrid grid(32, 16, FilterConfig{});
  grid.ts[0] = 0;
  grid.iv[0] = 1000;
  grid.ts[1] = 777;
  grid.iv[1] = 333;
  grid.active[1] = 1;
  global_update(grid, 20'000, 0.25);
  CHECK(grid.ts[0] == 5000);
  CHECK(grid.iv[0] == 5750);
  CHECK(grid.ts[1] == 777);
  CHECK(grid.iv[1] == 333);
  CHECK(grid.active[1] == 0);

  // Repeated updates with no events approach `now` monotonically.
  double prev = grid.ts[0];
  for (int i = 0; i < 5; ++i) {
    global_update(grid, 20'000, 0.25);
    CHECK(grid.ts[0] > prev);
    CHECK(grid.ts[0] <= 20'000);
    prev = grid.ts[0];
  }
}

TEST_CASE("global update clock") {
  GlobalUpdateClock clock(20'000);
  CHECK_FALSE(clock.crossed(0).has_value());
  CHECK_FALSE(clock.crossed(19'999).has_value());
  CHECK(clock.crossed(20'000) == std::optional<std::int64_t>{20'000});
  CHECK_FALSE(clock.crossed(20'001).has_value());
  CHECK(clock.crossed(95'000) == std::optional<std::int64_t>{80'000});
  CHECK(clock.crossed(100'000) == std::optional<std::int64_t>{100'000});
  GlobalUpdateClock off(0);
  CHECK_FALSE(off.crossed(1'000'000).has_value());
}

TEST_CASE("cold start rejects and a burst in one area passes") {
  const EventStream empty{64, 64, {}};
  CHECK(filter_stream(empty, FilterConfig{}, Algo::dif).empty());

  FilterConfig cfg;
  AreaGrid cold(64, 64, cfg);
  const double oracle = dif_score(neighbor_context(cold, 20, 20), 1e6);
  CHECK(oracle == doctest::Approx(1e6));

  const EventStream first{64, 64, {{1'000'000, 20, 20, 1}}};
  const auto out = filter_stream(first, no_global(cfg), Algo::dif);
  CHECK(out[0].score == doctest::Approx(oracle));
  CHECK_FALSE(out[0].pass);
  CHECK_FALSE(filter_stream(first, cfg, Algo::dif)[0].pass);
  CHECK_FALSE(filter_stream(first, no_global(cfg), Algo::bif)[0].pass);

  // A dense burst near one corner shared by four areas pulls every slot close to the event time.
  EventStream burst{64, 64, {}};
  const std::uint16_t xs[4] = {15, 16, 15, 16}, ys[4] = {15, 15, 16, 16};
  for (int i = 0; i < 200; ++i) burst.events.push_back({1'000'000 + 10 * i, xs[i % 4], ys[i % 4], 1});
  const auto b = filter_stream(burst, no_global(cfg), Algo::dif);
  CHECK(b.back().pass);
  CHECK(b.back().score < 200);
}

TEST_CASE("unsorted input and bad config are rejected") {
  const EventStream s{32, 32, {{10, 1, 1, 0}, {5, 1, 1, 0}}};
  CHECK_THROWS_AS(filter_stream(s, FilterConfig{}, Algo::dif), StreamError);
  FilterConfig bad;
  bad.scale = 12;
  CHECK_THROWS_AS(filter_stream(EventStream{32, 32, {}}, bad, Algo::dif), ConfigError);
}

TEST_CASE("filter properties on a mixed scene") {
  const EventStream s = test_scene();
  for (Algo algo : {Algo::dif, Algo::bif}) {
    CAPTURE(static_cast<int>(algo));
    FilterConfig a, b;
    a.filter_length_us = 100;
    b.filter_length_us = 5000;
    const auto ra = filter_stream(s, a, algo), rb = filter_stream(s, b, algo);
    REQUIRE(ra.size() == s.size());
    std::size_t pa = 0, pb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
      // The state never depends on F_L, so scores agree and pass sets nest.
      REQUIRE(ra[i].score == rb[i].score);
      REQUIRE((!ra[i].pass || rb[i].pass));
      pa += ra[i].pass;
      pb += rb[i].pass;
    }
    CHECK(pa < pb);

    // Shifting every timestamp and the initial state together changes nothing.
    EventStream shifted = s;
    for (Event& e : shifted.events) e.t += 1'000'000;
    FilterConfig c0 = no_global(), c1 = no_global();
    c1.init_timestamp_us = 1'000'000;
    const auto s0 = filter_stream(s, c0, algo), s1 = filter_stream(shifted, c1, algo);
    for (std::size_t i = 0; i < s0.size(); ++i) {
      REQUIRE(s0[i].score == doctest::Approx(s1[i].score).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("dif score is a convex combination of the deltas") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dt_d(-1e4, 1e6), iv_d(1e-3, 1.6e7), d_d(0.5, 25);
  for (int i = 0; i < 10'000; ++i) {
    Quad<double> dt, iv, d;
    for (int k = 0; k < 4; ++k) {
      dt[k] = dt_d(rng);
      iv[k] = iv_d(rng);
      d[k] = d_d(rng);
    }
    const double s = dif_score<double>(dt, iv, d);
    const auto [lo, hi] = std::minmax_element(dt.begin(), dt.end());
    REQUIRE(s >= *lo - 1e-6 * std::abs(*lo) - 1e-9);
    REQUIRE(s <= *hi + 1e-6 * std::abs(*hi) + 1e-9);
    const double b = bif_score<double>(dt, iv, d[0], d[1], d[2], d[3]);
    REQUIRE(b >= *lo - 1e-6 * std::abs(*lo) - 1e-9);
    REQUIRE(b <= *hi + 1e-6 * std::abs(*hi) + 1e-9);
  }
}
