#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "evfilt/area_layout.hpp"
#include "evfilt/dif_math.hpp"
#include "evfilt/events.hpp"
#include "evfilt/scored.hpp"

namespace evfilt {

/// Intervals collapse to zero when several events share one timestamp and
/// u = 1. Scoring floors them here so weights stay finite.
inline constexpr double kMinIntervalUs = 1.0 / 1024.0;

/// Parameters shared by the floating-point and hardware filters. Defaults are
/// the reference hardware configuration.
struct FilterConfig {
  int scale = 16;                              // subarea side, pixels
  int update_shift = 2;                        // u = 2^-update_shift
  std::int64_t filter_length_us = 200;         // pass iff score < filter_length_us
  std::int64_t global_update_period_us = 20'000;  // 0 disables global updates
  std::int64_t init_interval_us = 20'000;
  std::int64_t init_timestamp_us = 0;

  double update_factor() const { return 1.0 / static_cast<double>(std::int64_t{1} << update_shift); }
  /// Throws ConfigError.
  void validate() const;
};

/// Per-subarea filter state: filtered timestamp, interval estimate, activity flag.
struct AreaGrid {
  AreaLayout layout;
  std::vector<double> ts;
  std::vector<double> iv;
  std::vector<std::uint8_t> active;

  AreaGrid() = default;
  AreaGrid(std::uint16_t width, std::uint16_t height, const FilterConfig& cfg);

  std::uint32_t cols() const { return layout.cols(); }
  std::uint32_t rows() const { return layout.rows(); }
  std::size_t size() const { return ts.size(); }
};

/// Real-valued view of the four areas an event interpolates over.
struct NeighborContext {
  NeighborSlots slots;
  Quad<double> ts{};
  Quad<double> iv{};
  double dx1 = 0, dx2 = 0, dy1 = 0, dy2 = 0;
  Quad<double> dist{};  // Euclidean distance to each area centre

  Quad<double> deltas(double event_t) const {
    return {event_t - ts[0], event_t - ts[1], event_t - ts[2], event_t - ts[3]};
  }
};

using DecisionTrace = DecisionTraceT<double>;

NeighborContext neighbor_context(const AreaGrid& grid, std::uint16_t x, std::uint16_t y);

/// IIR update of the single area owning (x, y); both updates read the
/// pre-update timestamp.
void update_area(AreaGrid& grid, std::uint32_t area, double event_t, double u);
void update_area(AreaGrid& grid, const Event& e, double u);

double dif_score(const NeighborContext& ctx, double event_t);
double bif_score(const NeighborContext& ctx, double event_t);
DecisionTrace dif_decide_division_free(const NeighborContext& ctx, double event_t, double filter_len);
DecisionTrace bif_decide_division_free(const NeighborContext& ctx, double event_t, double filter_len);

/// Inactive areas absorb a pseudo-event at `now`; every activity flag is cleared.
void global_update(AreaGrid& grid, double now, double u);

/// Streaming DIF/BIF filter owning one grid. Events must arrive in time order.
class AreaFilter {
 public:
  AreaFilter(std::uint16_t width, std::uint16_t height, const FilterConfig& cfg, Algo algo);

  /// Score against the pre-update state, then update the owning area.
  ScoredEvent process(const Event& e);

  const AreaGrid& grid() const { return grid_; }
  const FilterConfig& config() const { return cfg_; }
  std::uint64_t global_updates() const { return global_updates_; }

 private:
  FilterConfig cfg_;
  Algo algo_;
  double u_;
  AreaGrid grid_;
  GlobalUpdateClock clock_;
  std::int64_t last_t_ = 0;
  std::uint64_t global_updates_ = 0;
  // Exact centre distances and half-distances per in-area offset, row-major by (off_y, off_x).
  struct OffsetGeometry {
    Quad<double> dist;
    double dx1, dx2, dy1, dy2;
  };
  std::vector<OffsetGeometry> geometry_;
};

/// Throws StreamError on unsorted input and ConfigError on bad config.
std::vector<ScoredEvent> filter_stream(const EventStream& stream, const FilterConfig& cfg, Algo algo);

}  // namespace evfilt
