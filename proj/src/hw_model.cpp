#include "evfilt/hw_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace evfilt {

void HwParams::validate() const {
  if (trunc_bits < 7 || trunc_bits > 10) throw ConfigError("trunc bits must be in [7, 10]");
  if (k_sat_bits < 11 || k_sat_bits > 13) throw ConfigError("saturation bits must be 11, 12 or 13");
  if (dt_bits != 24) throw ConfigError("timestamp difference width is fixed at 24 bits");
  if (dist_frac_bits != 2) throw ConfigError("distance precision is fixed at 2 fractional bits");
  if (ts_bits != 32) throw ConfigError("stored timestamp width is fixed at 32 bits");
  if (iv_bits < 1 || iv_bits > 31) throw ConfigError("interval width must be in [1, 31]");
}

std::uint32_t quantize_distance(double dx, double dy, int frac_bits) {
  const double scaled = std::sqrt(dx * dx + dy * dy) * static_cast<double>(1u << frac_bits);
  return static_cast<std::uint32_t>(std::max<long>(1, std::lround(scaled)));
}

DistanceLut::DistanceLut(int scale, int frac_bits) : scale_(scale), frac_bits_(frac_bits) {
  table_.resize(static_cast<std::size_t>(scale) * scale);
  const AreaLayout probe(static_cast<std::uint16_t>(scale), static_cast<std::uint16_t>(scale), scale);
  for (int oy = 0; oy < scale; ++oy) {
    for (int ox = 0; ox < scale; ++ox) {
      const NeighborSlots s =
          probe.neighbors(static_cast<std::uint16_t>(ox), static_cast<std::uint16_t>(oy));
      const double dx1 = 0.5 * s.dx1_h, dx2 = 0.5 * s.dx2_h;
      const double dy1 = 0.5 * s.dy1_h, dy2 = 0.5 * s.dy2_h;
      table_[static_cast<std::size_t>(oy) * scale + ox] = {
          quantize_distance(dx1, dy1, frac_bits), quantize_distance(dx2, dy1, frac_bits),
          quantize_distance(dx1, dy2, frac_bits), quantize_distance(dx2, dy2, frac_bits)};
    }
  }
}

std::uint64_t hw_k(std::uint64_t interval, std::uint32_t dist_q, int trunc_bits, int sat_bits) {
  const std::uint64_t shifted = (interval * dist_q) >> trunc_bits;
  const std::uint64_t k_max = (std::uint64_t{1} << sat_bits) - 1;
  return std::clamp<std::uint64_t>(shifted, 1, k_max);
}

std::int64_t wrap_signed(std::int64_t value, int bits) {
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  const std::uint64_t v = static_cast<std::uint64_t>(value) & mask;
  const std::uint64_t sign = std::uint64_t{1} << (bits - 1);
  return static_cast<std::int64_t>(v ^ sign) - static_cast<std::int64_t>(sign);
}

HwTrace hw_decide(const std::array<std::int64_t, 4>& dt, const std::array<std::uint64_t, 4>& k,
                  std::int64_t filter_len) {
  HwTrace tr;
  tr.k = k;
  auto mul = [&tr](i128 a, i128 b) {
    ++tr.multiplications;
    return a * b;
  };
  tr.kd1 = static_cast<std::uint64_t>(mul(k[s12], k[s21]));
  tr.kd2 = static_cast<std::uint64_t>(mul(k[s11], k[s22]));
  tr.d[s11] = mul(tr.kd1, k[s22]);
  tr.d[s12] = mul(tr.kd2, k[s21]);
  tr.d[s21] = mul(tr.kd2, k[s12]);
  tr.d[s22] = mul(tr.kd1, k[s11]);
  tr.d_sum = (tr.d[s11] + tr.d[s12]) + (tr.d[s21] + tr.d[s22]);
  tr.f_c = mul(filter_len, tr.d_sum);
  tr.dt_c = (mul(dt[s11], tr.d[s11]) + mul(dt[s12], tr.d[s12])) +
            (mul(dt[s21], tr.d[s21]) + mul(dt[s22], tr.d[s22]));
  tr.pass = tr.f_c > tr.dt_c;
  return tr;
}

HwAreaState hw_update_area(HwAreaState s, std::int64_t event_t, int update_shift, const HwParams& p) {
  const std::uint64_t ts_mask = (std::uint64_t{1} << p.ts_bits) - 1;
  const std::int64_t diff =
      wrap_signed(static_cast<std::int64_t>((static_cast<std::uint64_t>(event_t) & ts_mask) - s.ts),
                  p.ts_bits);
  // >> on negative signed values is an arithmetic (floor) shift in C++20.
  const std::int64_t ts_next = static_cast<std::int64_t>(s.ts) + (diff >> update_shift);
  const std::int64_t iv_next =
      static_cast<std::int64_t>(s.iv) + ((diff - static_cast<std::int64_t>(s.iv)) >> update_shift);
  HwAreaState out;
  out.ts = static_cast<std::uint32_t>(static_cast<std::uint64_t>(ts_next) & ts_mask);
  out.iv = static_cast<std::uint32_t>(std::clamp<std::int64_t>(iv_next, 0, p.iv_max()));
  return out;
}

HwGrid::HwGrid(std::uint16_t width, std::uint16_t height, const FilterConfig& cfg, const HwParams& p)
    : layout(width, height, cfg.scale),
      state(layout.areas(),
            HwAreaState{static_cast<std::uint32_t>(cfg.init_timestamp_us),
                        static_cast<std::uint32_t>(
                            std::min<std::int64_t>(cfg.init_interval_us, p.iv_max()))}),
      active(layout.areas(), 0) {}

void hw_global_update(HwGrid& grid, std::int64_t now, int update_shift, const HwParams& p) {
  for (std::size_t a = 0; a < grid.state.size(); ++a) {
    if (grid.active[a]) {
      grid.active[a] = 0;
    } else {
      grid.state[a] = hw_update_area(grid.state[a], now, update_shift, p);
    }
  }
}

namespace {

const FilterConfig& checked(const FilterConfig& cfg, const HwParams& p) {
  cfg.validate();
  p.validate();
  return cfg;
}

}  // namespace

HwDatapath::HwDatapath(const FilterConfig& cfg, const HwParams& p)
    : cfg_(checked(cfg, p)), params_(p), lut_(cfg.scale, p.dist_frac_bits) {}

HwEvaluation HwDatapath::evaluate(const Event& e, const NeighborSlots& slots,
                                  const std::array<HwAreaState, 4>& reads) const {
  HwEvaluation ev;
  const std::uint64_t ts_mask = (std::uint64_t{1} << params_.ts_bits) - 1;
  const auto event_ts = static_cast<std::int64_t>(static_cast<std::uint64_t>(e.t) & ts_mask);
  const auto& dist = lut_.at(slots.off_x, slots.off_y);
  std::array<std::uint64_t, 4> k{};
  for (std::size_t i = 0; i < 4; ++i) {
    ev.dt[i] = wrap_signed(event_ts - static_cast<std::int64_t>(reads[i].ts), params_.dt_bits);
    k[i] = hw_k(reads[i].iv, dist[i], params_);
  }
  ev.trace = hw_decide(ev.dt, k, cfg_.filter_length_us);
  ev.own_next = hw_update_area(reads[slots.own_slot], e.t, cfg_.update_shift, params_);
  return ev;
}

HwFilter::HwFilter(std::uint16_t width, std::uint16_t height, const FilterConfig& cfg, const HwParams& p)
    : path_(cfg, p), grid_(width, height, cfg, p), clock_(cfg.global_update_period_us) {
  if (width == 0 || height == 0) throw ConfigError("sensor geometry must be non-zero");
}

ScoredEvent HwFilter::process(const Event& e, HwTrace* trace) {
  if (e.t < last_t_) throw StreamError("events must be in non-decreasing time order");
  if (e.x >= grid_.layout.width() || e.y >= grid_.layout.height()) {
    throw StreamError("event outside sensor geometry");
  }
  last_t_ = e.t;
  if (const auto boundary = clock_.crossed(e.t)) {
    hw_global_update(grid_, *boundary, path_.config().update_shift, path_.params());
    ++global_updates_;
  }
  const NeighborSlots slots = grid_.layout.neighbors(e.x, e.y);
  std::array<HwAreaState, 4> reads;
  for (std::size_t i = 0; i < 4; ++i) reads[i] = grid_.state[slots.area[i]];
  const HwEvaluation ev = path_.evaluate(e, slots, reads);
  grid_.state[slots.own_area] = ev.own_next;
  grid_.active[slots.own_area] = 1;
  if (trace) *trace = ev.trace;
  return ScoredEvent{e, ev.trace.score(), ev.trace.pass};
}

std::vector<ScoredEvent> hw_filter_stream(const EventStream& stream, const FilterConfig& cfg,
                                          const HwParams& p) {
  HwFilter filter(stream.width, stream.height, cfg, p);
  std::vector<ScoredEvent> out;
  out.reserve(stream.size());
  for (const Event& e : stream.events) out.push_back(filter.process(e));
  return out;
}

}  // namespace evfilt
