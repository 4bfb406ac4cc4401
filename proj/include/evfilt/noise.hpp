#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "evfilt/events.hpp"

namespace evfilt {

/// Name recorded in run manifests so generated streams can be reproduced.
inline constexpr const char* kNoiseRngAlgorithm = "mt19937_64/inverse-geometric-skip";

/// Background-activity noise with one common per-pixel rate.
struct NoiseConfig {
  std::uint16_t width = 640;
  std::uint16_t height = 480;
  double rate_hz = 1.0;  // per pixel
  std::int64_t duration_us = 1'000'000;
  std::int64_t time_step_us = 100;
  std::int64_t start_us = 0;
  std::uint64_t seed = 1;

  /// Per-trial Bernoulli probability, rate * step.
  double trial_probability() const { return rate_hz * static_cast<double>(time_step_us) * 1e-6; }
  void validate() const;
};

/// Uniform double in [0, 1) from the top 53 bits of one generator draw.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// One Bernoulli trial per pixel per time step. Successes are found by
/// sampling geometric gaps over the flattened (step, row, column) index, which
/// is the same distribution as running every trial but costs O(events).
/// Timestamps sit at step start; polarity is 2 or 3 with equal odds.
EventStream generate_noise(const NoiseConfig& cfg);

}  // namespace evfilt
