#include "evfilt/baselines.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace evfilt {

CorrelationFilter::CorrelationFilter(std::uint16_t width, std::uint16_t height, int support,
                                     std::int64_t window_us)
    : map_(width, height), support_(support), window_us_(window_us) {
  if (support < 1 || support > 8) throw ConfigError("support count must be in [1, 8]");
  if (window_us <= 0) throw ConfigError("window must be positive");
  if (width == 0 || height == 0) throw ConfigError("sensor geometry must be non-zero");
}

ScoredEvent CorrelationFilter::process(const Event& e) {
  if (e.t < last_t_) throw StreamError("events must be in non-decreasing time order");
  if (e.x >= map_.width || e.y >= map_.height) throw StreamError("event outside sensor geometry");
  last_t_ = e.t;

  std::array<std::int64_t, 8> recent{};  // missing neighbours stay at 0
  std::size_t n = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int nx = e.x + dx, ny = e.y + dy;
      if (nx >= 0 && ny >= 0 && nx < map_.width && ny < map_.height) recent[n] = map_.at(nx, ny);
      ++n;
    }
  }
  // support-th most recent neighbour timestamp
  std::nth_element(recent.begin(), recent.begin() + (support_ - 1), recent.end(),
                   std::greater<>());
  ScoredEvent out;
  out.event = e;
  out.score = static_cast<double>(e.t - recent[support_ - 1]);
  out.pass = out.score < static_cast<double>(window_us_);
  map_.last[static_cast<std::size_t>(e.y) * map_.width + e.x] = e.t;
  return out;
}

std::vector<ScoredEvent> stcf_filter(const EventStream& stream, int support, std::int64_t window_us) {
  CorrelationFilter f(stream.width, stream.height, support, window_us);
  std::vector<ScoredEvent> out;
  out.reserve(stream.size());
  for (const Event& e : stream.events) out.push_back(f.process(e));
  return out;
}

std::vector<ScoredEvent> nnb_filter(const EventStream& stream, std::int64_t window_us) {
  if (window_us <= 0) throw ConfigError("window must be positive");
  const int w = stream.width, h = stream.height;
  std::vector<std::int64_t> last(static_cast<std::size_t>(w) * h, 0);
  std::vector<ScoredEvent> out;
  out.reserve(stream.size());
  std::int64_t prev_t = 0;
  for (const Event& e : stream.events) {
    if (e.t < prev_t) throw StreamError("events must be in non-decreasing time order");
    prev_t = e.t;
    std::int64_t newest = 0;
    for (int y = std::max(0, e.y - 1); y <= std::min(h - 1, e.y + 1); ++y) {
      for (int x = std::max(0, e.x - 1); x <= std::min(w - 1, e.x + 1); ++x) {
        if (x == e.x && y == e.y) continue;
        newest = std::max(newest, last[static_cast<std::size_t>(y) * w + x]);
      }
    }
    const double score = static_cast<double>(e.t - newest);
    out.push_back(ScoredEvent{e, score, score < static_cast<double>(window_us)});
    last[static_cast<std::size_t>(e.y) * w + e.x] = e.t;
  }
  return out;
}

}  // namespace evfilt
