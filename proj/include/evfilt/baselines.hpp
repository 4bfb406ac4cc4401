#pragma once

#include <cstdint>
#include <vector>

#include "evfilt/events.hpp"
#include "evfilt/scored.hpp"

namespace evfilt {

/// Last event time per pixel; 0 means never seen.
struct PixelTimestampMap {
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::vector<std::int64_t> last;

  PixelTimestampMap(std::uint16_t w, std::uint16_t h)
      : width(w), height(h), last(static_cast<std::size_t>(w) * h, 0) {}

  std::int64_t at(int x, int y) const { return last[static_cast<std::size_t>(y) * width + x]; }
};

/// Spatiotemporal correlation filter: an event passes when at least
/// `support` distinct pixels of its 8-neighbourhood fired less than
/// `window_us` ago. The score is the age of the support-th most recent
/// neighbour, so thresholding it at any window gives that window's decision.
/// Out-of-sensor neighbours count as never seen. support = 1 is the
/// nearest-neighbour filter.
class CorrelationFilter {
 public:
  CorrelationFilter(std::uint16_t width, std::uint16_t height, int support, std::int64_t window_us);

  ScoredEvent process(const Event& e);
  const PixelTimestampMap& map() const { return map_; }

 private:
  PixelTimestampMap map_;
  int support_;
  std::int64_t window_us_;
  std::int64_t last_t_ = 0;
};

std::vector<ScoredEvent> nnb_filter(const EventStream& stream, std::int64_t window_us);
std::vector<ScoredEvent> stcf_filter(const EventStream& stream, int support, std::int64_t window_us);

}  // namespace evfilt
