#include "evfilt/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "evfilt/noise.hpp"

namespace evfilt {

void SceneConfig::validate() const {
  if (width == 0 || height == 0) throw ConfigError("scene geometry must be non-zero");
  if (duration_us <= 0 || time_step_us <= 0) throw ConfigError("scene timing must be positive");
  if (bars < 0 || bar_width <= 0) throw ConfigError("scene bar settings out of range");
  if (!(speed_px_per_s > 0.0)) throw ConfigError("scene speed must be positive");
  if (!(fire_probability > 0.0 && fire_probability <= 1.0)) {
    throw ConfigError("fire probability must be in (0, 1]");
  }
  if (jitter_us < 0) throw ConfigError("jitter must be non-negative");
}

EventStream generate_moving_bars(const SceneConfig& cfg) {
  cfg.validate();
  EventStream out{cfg.width, cfg.height, {}};
  std::mt19937_64 rng(cfg.seed);

  struct Bar {
    bool vertical;
    double phase;
    double speed;
    std::int64_t extent;  // sensor size along the motion axis
    std::int64_t span;    // sensor size along the bar
  };
  std::vector<Bar> bars;
  for (int b = 0; b < cfg.bars; ++b) {
    const bool vertical = (b % 2) == 0;
    const std::int64_t extent = vertical ? cfg.width : cfg.height;
    const std::int64_t span = vertical ? cfg.height : cfg.width;
    // Later bars move a little slower so they do not travel in lockstep.
    const double speed = cfg.speed_px_per_s / (1.0 + 0.37 * b);
    const double phase = unit_uniform(rng) * static_cast<double>(extent + cfg.bar_width);
    bars.push_back({vertical, phase, speed, extent, span});
  }

  auto emit_line = [&](const Bar& bar, std::int64_t line, std::int64_t t, std::uint8_t pol) {
    for (std::int64_t s = 0; s < bar.span; ++s) {
      if (unit_uniform(rng) >= cfg.fire_probability) continue;
      std::int64_t lag = 0;
      if (cfg.jitter_us > 0) {
        lag = static_cast<std::int64_t>(unit_uniform(rng) * static_cast<double>(cfg.jitter_us + 1));
        lag -= lag % cfg.time_step_us;
      }
      if (t + lag >= cfg.duration_us) continue;
      Event e;
      e.t = t + lag;
      e.x = static_cast<std::uint16_t>(bar.vertical ? line : s);
      e.y = static_cast<std::uint16_t>(bar.vertical ? s : line);
      e.p = pol;
      out.events.push_back(e);
    }
  };

  for (std::int64_t t = 0; t < cfg.duration_us; t += cfg.time_step_us) {
    const double t0 = static_cast<double>(t) * 1e-6;
    const double t1 = static_cast<double>(t + cfg.time_step_us) * 1e-6;
    for (const Bar& bar : bars) {
      const std::int64_t cycle = bar.extent + cfg.bar_width;
      const double u0 = bar.phase + bar.speed * t0;
      const double u1 = bar.phase + bar.speed * t1;
      // Integer positions passed by the leading edge during this step.
      for (auto n = static_cast<std::int64_t>(std::floor(u0)) + 1;
           n <= static_cast<std::int64_t>(std::floor(u1)); ++n) {
        const std::int64_t lead = n % cycle;
        const std::int64_t trail = ((n - cfg.bar_width) % cycle + cycle) % cycle;
        if (lead < bar.extent) emit_line(bar, lead, t, 1);
        if (trail < bar.extent) emit_line(bar, trail, t, 0);
      }
    }
  }

  std::stable_sort(out.events.begin(), out.events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  return out;
}

}  // namespace evfilt
