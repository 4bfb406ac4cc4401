#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evfilt/hw_model.hpp"

namespace evfilt {

inline constexpr int kPipelineLatencyCycles = 30;
/// Cycles a read lags behind writes: reads see the memory as it was three
/// cycles earlier, so up to three in-flight writes must be forwarded.
inline constexpr int kReadLagCycles = 3;
/// Fixed cost of one global update on top of one cycle per area. Pinned so
/// the 1280x720 @ 312.70 MHz and 640x480 @ 400.32 MHz designs land on their
/// measured 11.53 us and 3.01 us.
inline constexpr int kDefaultGlobalUpdateOverheadCycles = 5;

struct PipelineOptions {
  double clock_hz = 312.70e6;
  int overhead_cycles = kDefaultGlobalUpdateOverheadCycles;
  bool forwarding = true;  // off: reads return stale memory (hazard exposed)
};

struct PipelineStats {
  double clock_hz = 0;
  std::uint64_t events_processed = 0;
  std::uint64_t stall_cycles = 0;
  std::uint64_t global_updates = 0;
  std::uint64_t total_cycles = 0;
  std::uint64_t forwarded_reads = 0;
  int latency_cycles = kPipelineLatencyCycles;
  std::uint32_t areas = 0;
  std::int64_t global_update_period_us = 0;
  double global_update_duration_us = 0;
  double effective_meps = 0;

  double latency_ns() const { return latency_cycles / clock_hz * 1e9; }
};

/// Closed-form throughput for a saturated input: one event per cycle except
/// during global updates, which cost (areas + overhead) cycles each period.
PipelineStats pipeline_model(std::uint16_t width, std::uint16_t height, int scale,
                             std::int64_t global_update_period_us, const PipelineOptions& opt);

struct PipelineResult {
  std::vector<ScoredEvent> decisions;
  PipelineStats stats;
};

/// Cycle-level run: one event issues per cycle, area reads come from memory as
/// of three cycles earlier, and a three-entry forwarding cache replaces any
/// area written in that window. A global update drains the pipe and stalls
/// issue for (areas + overhead) cycles.
PipelineResult pipeline_simulate(const EventStream& stream, const FilterConfig& cfg,
                                 const HwParams& p, const PipelineOptions& opt);

/// Human-readable or CSV rendering of pipeline statistics.
std::string throughput_report(const PipelineStats& stats, bool csv = false);

}  // namespace evfilt
