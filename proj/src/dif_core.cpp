#include "evfilt/dif_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evfilt {

void FilterConfig::validate() const {
  if (scale != 8 && scale != 16 && scale != 32) {
    throw ConfigError("scale must be 8, 16 or 32 (got " + std::to_string(scale) + ")");
  }
  if (update_shift < 0 || update_shift > 30) throw ConfigError("update shift must be in [0, 30]");
  if (filter_length_us <= 0) throw ConfigError("filter length must be positive");
  if (global_update_period_us < 0) throw ConfigError("global update period must be >= 0");
  if (init_interval_us <= 0) throw ConfigError("initial interval must be positive");
  if (init_timestamp_us < 0) throw ConfigError("initial timestamp must be non-negative");
}

AreaGrid::AreaGrid(std::uint16_t width, std::uint16_t height, const FilterConfig& cfg)
    : layout(width, height, cfg.scale),
      ts(layout.areas(), static_cast<double>(cfg.init_timestamp_us)),
      iv(layout.areas(), static_cast<double>(cfg.init_interval_us)),
      active(layout.areas(), 0) {}

namespace {

NeighborContext make_context(const AreaGrid& grid, const NeighborSlots& slots) {
  NeighborContext ctx;
  ctx.slots = slots;
  for (std::size_t i = 0; i < 4; ++i) {
    ctx.ts[i] = grid.ts[slots.area[i]];
    ctx.iv[i] = grid.iv[slots.area[i]];
  }
  ctx.dx1 = 0.5 * slots.dx1_h;
  ctx.dx2 = 0.5 * slots.dx2_h;
  ctx.dy1 = 0.5 * slots.dy1_h;
  ctx.dy2 = 0.5 * slots.dy2_h;
  ctx.dist = {std::hypot(ctx.dx1, ctx.dy1), std::hypot(ctx.dx2, ctx.dy1),
              std::hypot(ctx.dx1, ctx.dy2), std::hypot(ctx.dx2, ctx.dy2)};
  return ctx;
}

const FilterConfig& validated(const FilterConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

NeighborContext neighbor_context(const AreaGrid& grid, std::uint16_t x, std::uint16_t y) {
  return make_context(grid, grid.layout.neighbors(x, y));
}

void update_area(AreaGrid& grid, std::uint32_t area, double event_t, double u) {
  const double ts = grid.ts[area];
  grid.ts[area] = ts * (1.0 - u) + event_t * u;
  grid.iv[area] = grid.iv[area] * (1.0 - u) + (event_t - ts) * u;
  grid.active[area] = 1;
}

void update_area(AreaGrid& grid, const Event& e, double u) {
  update_area(grid, grid.layout.area_of(e.x, e.y), static_cast<double>(e.t), u);
}

double dif_score(const NeighborContext& ctx, double event_t) {
  return dif_score<double>(ctx.deltas(event_t), ctx.iv, ctx.dist);
}

double bif_score(const NeighborContext& ctx, double event_t) {
  return bif_score<double>(ctx.deltas(event_t), ctx.iv, ctx.dx1, ctx.dx2, ctx.dy1, ctx.dy2);
}

DecisionTrace dif_decide_division_free(const NeighborContext& ctx, double event_t, double filter_len) {
  return dif_decide_division_free<double>(ctx.deltas(event_t), ctx.iv, ctx.dist, filter_len);
}

DecisionTrace bif_decide_division_free(const NeighborContext& ctx, double event_t, double filter_len) {
  return bif_decide_division_free<double>(ctx.deltas(event_t), ctx.iv, ctx.dx1, ctx.dx2, ctx.dy1,
                                          ctx.dy2, filter_len);
}

void global_update(AreaGrid& grid, double now, double u) {
  for (std::size_t a = 0; a < grid.size(); ++a) {
    if (grid.active[a]) {
      grid.active[a] = 0;
      continue;
    }
    const double ts = grid.ts[a];
    grid.ts[a] = ts * (1.0 - u) + now * u;
    grid.iv[a] = grid.iv[a] * (1.0 - u) + (now - ts) * u;
  }
}

AreaFilter::AreaFilter(std::uint16_t width, std::uint16_t height, const FilterConfig& cfg, Algo algo)
    : cfg_(validated(cfg)),
      algo_(algo),
      u_(cfg.update_factor()),
      grid_(width, height, cfg),
      clock_(cfg.global_update_period_us) {
  if (width == 0 || height == 0) throw ConfigError("sensor geometry must be non-zero");
  const int scale = cfg.scale;
  geometry_.resize(static_cast<std::size_t>(scale) * scale);
  for (int oy = 0; oy < scale; ++oy) {
    for (int ox = 0; ox < scale; ++ox) {
      // Any area works for offsets; use the one at the origin.
      const AreaLayout probe(static_cast<std::uint16_t>(scale), static_cast<std::uint16_t>(scale), scale);
      const NeighborSlots s = probe.neighbors(static_cast<std::uint16_t>(ox), static_cast<std::uint16_t>(oy));
      OffsetGeometry g;
      g.dx1 = 0.5 * s.dx1_h;
      g.dx2 = 0.5 * s.dx2_h;
      g.dy1 = 0.5 * s.dy1_h;
      g.dy2 = 0.5 * s.dy2_h;
      g.dist = {std::hypot(g.dx1, g.dy1), std::hypot(g.dx2, g.dy1), std::hypot(g.dx1, g.dy2),
                std::hypot(g.dx2, g.dy2)};
      geometry_[static_cast<std::size_t>(oy) * scale + ox] = g;
    }
  }
}

ScoredEvent AreaFilter::process(const Event& e) {
  if (e.t < last_t_) throw StreamError("events must be in non-decreasing time order");
  if (e.x >= grid_.layout.width() || e.y >= grid_.layout.height()) {
    throw StreamError("event outside sensor geometry");
  }
  last_t_ = e.t;
  if (const auto boundary = clock_.crossed(e.t)) {
    global_update(grid_, static_cast<double>(*boundary), u_);
    ++global_updates_;
  }

  const NeighborSlots slots = grid_.layout.neighbors(e.x, e.y);
  const OffsetGeometry& g = geometry_[static_cast<std::size_t>(slots.off_y) * cfg_.scale + slots.off_x];
  const double t = static_cast<double>(e.t);
  Quad<double> dt, iv;
  for (std::size_t i = 0; i < 4; ++i) {
    dt[i] = t - grid_.ts[slots.area[i]];
    iv[i] = std::max(grid_.iv[slots.area[i]], kMinIntervalUs);
  }
  ScoredEvent out;
  out.event = e;
  out.score = algo_ == Algo::dif ? dif_score<double>(dt, iv, g.dist)
                                 : bif_score<double>(dt, iv, g.dx1, g.dx2, g.dy1, g.dy2);
  out.pass = out.score < static_cast<double>(cfg_.filter_length_us);
  update_area(grid_, slots.own_area, t, u_);
  return out;
}

std::vector<ScoredEvent> filter_stream(const EventStream& stream, const FilterConfig& cfg, Algo algo) {
  AreaFilter filter(stream.width, stream.height, cfg, algo);
  std::vector<ScoredEvent> out;
  out.reserve(stream.size());
  for (const Event& e : stream.events) out.push_back(filter.process(e));
  return out;
}

}  // namespace evfilt
