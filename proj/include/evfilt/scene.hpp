#pragma once

#include <cstdint>

#include "evfilt/events.hpp"

namespace evfilt {

/// Synthetic clean recording: full-span bars sweeping across the sensor.
/// Even-numbered bars are vertical and move along x; odd ones are horizontal
/// and move along y. Each bar wraps around after leaving the sensor. Leading
/// edges emit polarity 1 and trailing edges polarity 0.
struct SceneConfig {
  std::uint16_t width = 640;
  std::uint16_t height = 480;
  std::int64_t duration_us = 1'000'000;
  std::int64_t time_step_us = 100;
  int bars = 2;
  int bar_width = 24;
  double speed_px_per_s = 800.0;
  /// Chance that a pixel crossed by an edge reports it.
  double fire_probability = 0.5;
  /// Per-event latency, uniform in [0, jitter_us], rounded down to the time step.
  std::int64_t jitter_us = 2000;
  std::uint64_t seed = 7;

  void validate() const;
};

EventStream generate_moving_bars(const SceneConfig& cfg);

}  // namespace evfilt
