#include "evfilt/pipeline.hpp"

#include <deque>
#include <iomanip>
#include <sstream>

namespace evfilt {

namespace {

void fill_rates(PipelineStats& s, std::uint32_t areas, std::int64_t period_us, const PipelineOptions& opt) {
  s.clock_hz = opt.clock_hz;
  s.areas = areas;
  s.global_update_period_us = period_us;
  const double cycles = static_cast<double>(areas) + opt.overhead_cycles;
  s.global_update_duration_us = cycles / opt.clock_hz * 1e6;
  const double busy = period_us > 0 ? s.global_update_duration_us / static_cast<double>(period_us) : 0.0;
  s.effective_meps = opt.clock_hz * (1.0 - busy) / 1e6;
}

}  // namespace

PipelineStats pipeline_model(std::uint16_t width, std::uint16_t height, int scale,
                             std::int64_t global_update_period_us, const PipelineOptions& opt) {
  if (!(opt.clock_hz > 0)) throw ConfigError("clock must be positive");
  if (global_update_period_us < 0) throw ConfigError("global update period must be >= 0");
  const AreaLayout layout(width, height, scale);
  PipelineStats s;
  fill_rates(s, layout.areas(), global_update_period_us, opt);
  return s;
}

PipelineResult pipeline_simulate(const EventStream& stream, const FilterConfig& cfg,
                                 const HwParams& p, const PipelineOptions& opt) {
  if (!(opt.clock_hz > 0)) throw ConfigError("clock must be positive");
  if (opt.overhead_cycles < 0) throw ConfigError("overhead cycles must be >= 0");
  const HwDatapath path(cfg, p);
  HwGrid memory(stream.width, stream.height, cfg, p);
  GlobalUpdateClock clock(cfg.global_update_period_us);

  struct Write {
    std::uint32_t area;
    HwAreaState value;
    std::uint64_t visible_at;  // first cycle whose reads see this write
  };
  std::deque<Write> in_flight;

  PipelineResult result;
  result.decisions.reserve(stream.size());
  PipelineStats& st = result.stats;
  fill_rates(st, memory.layout.areas(), cfg.global_update_period_us, opt);

  auto commit_until = [&](std::uint64_t cycle) {
    while (!in_flight.empty() && in_flight.front().visible_at <= cycle) {
      memory.state[in_flight.front().area] = in_flight.front().value;
      in_flight.pop_front();
    }
  };

  std::uint64_t cycle = 0;
  std::int64_t last_t = 0;
  for (const Event& e : stream.events) {
    if (e.t < last_t) throw StreamError("events must be in non-decreasing time order");
    last_t = e.t;
    if (const auto boundary = clock.crossed(e.t)) {
      commit_until(UINT64_MAX);
      hw_global_update(memory, *boundary, cfg.update_shift, p);
      const auto stall = static_cast<std::uint64_t>(memory.layout.areas() + opt.overhead_cycles);
      cycle += stall;
      st.stall_cycles += stall;
      ++st.global_updates;
    }

    commit_until(cycle);
    if (in_flight.size() > static_cast<std::size_t>(kReadLagCycles)) {
      throw std::logic_error("forwarding cache overflow");
    }
    const NeighborSlots slots = memory.layout.neighbors(e.x, e.y);
    std::array<HwAreaState, 4> reads;
    for (std::size_t i = 0; i < 4; ++i) {
      reads[i] = memory.state[slots.area[i]];
      if (!opt.forwarding) continue;
      // Newest matching in-flight write wins.
      for (auto it = in_flight.rbegin(); it != in_flight.rend(); ++it) {
        if (it->area == slots.area[i]) {
          reads[i] = it->value;
          ++st.forwarded_reads;
          break;
        }
      }
    }
    const HwEvaluation ev = path.evaluate(e, slots, reads);
    in_flight.push_back({slots.own_area, ev.own_next, cycle + kReadLagCycles + 1});
    memory.active[slots.own_area] = 1;
    result.decisions.push_back(ScoredEvent{e, ev.trace.score(), ev.trace.pass});
    ++cycle;
    ++st.events_processed;
  }
  commit_until(UINT64_MAX);
  st.total_cycles = cycle + (stream.empty() ? 0 : kPipelineLatencyCycles - 1);
  return result;
}

std::string throughput_report(const PipelineStats& s, bool csv) {
  std::ostringstream out;
  out << std::fixed;
  if (csv) {
    out << "clock_mhz,areas,period_us,global_update_us,effective_meps,latency_cycles,latency_ns,"
           "events,stall_cycles,total_cycles\n";
    out << std::setprecision(2) << s.clock_hz / 1e6 << ',' << s.areas << ','
        << s.global_update_period_us << ',' << s.global_update_duration_us << ','
        << s.effective_meps << ',' << s.latency_cycles << ',' << std::setprecision(1)
        << s.latency_ns() << ',' << s.events_processed << ',' << s.stall_cycles << ','
        << s.total_cycles << '\n';
    return out.str();
  }
  out << std::setprecision(2);
  out << "clock            " << s.clock_hz / 1e6 << " MHz\n";
  out << "areas            " << s.areas << '\n';
  if (s.global_update_period_us > 0) {
    out << "global update    " << s.global_update_duration_us << " us every "
        << s.global_update_period_us << " us\n";
  } else {
    out << "global update    disabled\n";
  }
  out << "throughput       " << s.effective_meps << " MEPS\n";
  out << "latency          " << s.latency_cycles << " cycles (" << std::setprecision(1)
      << s.latency_ns() << " ns)\n";
  if (s.events_processed > 0) {
    out << "events           " << s.events_processed << '\n';
    out << "stall cycles     " << s.stall_cycles << '\n';
    out << "total cycles     " << s.total_cycles << '\n';
  }
  return out.str();
}

}  // namespace evfilt
