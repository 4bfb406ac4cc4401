#include "evfilt/noise.hpp"

#include <cmath>
#include <string>

namespace evfilt {

void NoiseConfig::validate() const {
  if (width == 0 || height == 0) throw ConfigError("noise geometry must be non-zero");
  if (!(rate_hz >= 0.0) || !std::isfinite(rate_hz)) throw ConfigError("noise rate must be >= 0");
  if (time_step_us <= 0) throw ConfigError("noise time step must be positive");
  if (duration_us < time_step_us) throw ConfigError("noise duration must cover one time step");
  if (start_us < 0) throw ConfigError("noise start time must be non-negative");
  if (trial_probability() > 1.0) {
    throw ConfigError("rate * time_step = " + std::to_string(trial_probability()) +
                      " is not a valid Bernoulli probability");
  }
}

EventStream generate_noise(const NoiseConfig& cfg) {
  cfg.validate();
  EventStream out{cfg.width, cfg.height, {}};
  const double p = cfg.trial_probability();
  if (p <= 0.0) return out;

  const std::uint64_t pixels = static_cast<std::uint64_t>(cfg.width) * cfg.height;
  const std::uint64_t steps = static_cast<std::uint64_t>(cfg.duration_us / cfg.time_step_us);
  const std::uint64_t trials = pixels * steps;
  out.events.reserve(static_cast<std::size_t>(static_cast<double>(trials) * p * 1.01) + 16);

  std::mt19937_64 rng(cfg.seed);
  const double log_q = std::log1p(-p);  // -inf when p == 1
  std::uint64_t k = 0;
  while (k < trials) {
    if (p < 1.0) {
      const double u = 1.0 - unit_uniform(rng);  // (0, 1]
      const double gap = std::floor(std::log(u) / log_q);
      if (gap >= static_cast<double>(trials - k)) break;
      k += static_cast<std::uint64_t>(gap);
    }
    const std::uint64_t step = k / pixels;
    const std::uint64_t pix = k % pixels;
    Event e;
    e.t = cfg.start_us + static_cast<std::int64_t>(step) * cfg.time_step_us;
    e.x = static_cast<std::uint16_t>(pix % cfg.width);
    e.y = static_cast<std::uint16_t>(pix / cfg.width);
    e.p = static_cast<std::uint8_t>(2 + (rng() >> 63));
    out.events.push_back(e);
    ++k;
  }
  return out;
}

}  // namespace evfilt
