#pragma once

// Run-level operations behind the command line: algorithm dispatch, benchmark,
// parameter sweeps and run manifests.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evfilt/dif_core.hpp"
#include "evfilt/hw_model.hpp"
#include "evfilt/scene.hpp"

namespace evfilt {

inline constexpr const char* kToolVersion = "0.3.0";

/// "dif", "bif", "dif-hw", "nnb", "stcf" (support from `support`) or "stcfN".
struct AlgoSpec {
  enum class Kind { dif, bif, dif_hw, nnb, stcf };
  Kind kind = Kind::dif;
  int support = 2;

  static AlgoSpec parse(const std::string& name, int default_support = 2);
  std::string name() const;
  bool uses_areas() const { return kind == Kind::dif || kind == Kind::bif || kind == Kind::dif_hw; }
  friend bool operator==(const AlgoSpec&, const AlgoSpec&) = default;
};

/// Runs one filter. Baselines use cfg.filter_length_us as their window.
std::vector<ScoredEvent> run_filter(const EventStream& stream, const AlgoSpec& algo,
                                    const FilterConfig& cfg, const HwParams& hw = {});

/// 64-bit FNV-1a, used for input and output digests in manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);
std::optional<std::string> file_digest(const std::filesystem::path& path);

struct BenchReport {
  std::string algo;
  std::uint64_t events = 0;
  double seconds = 0;
  double meps = 0;
  std::uint64_t passed = 0;
  std::string output_digest;              // FNV-1a of the scores CSV
  std::optional<double> hw_agreement;     // fraction of equal decisions vs dif-hw

  std::string to_text() const;
};

BenchReport cmd_bench(const EventStream& stream, const AlgoSpec& algo, const FilterConfig& cfg,
                      const HwParams& hw = {}, bool compare_hw = false);

/// Clean scene plus noise at `noise_rate_hz`, truncated to `events` records.
EventStream synthetic_stream(std::uint64_t events, double noise_rate_hz = 1.0, std::uint64_t seed = 1);

struct SweepGrid {
  std::vector<AlgoSpec> algos{AlgoSpec{}};
  std::vector<int> scales{16};
  std::vector<int> update_shifts{2};
  std::vector<double> rates{1.0};
  std::vector<std::uint64_t> seeds{1};
  FilterConfig base;
  HwParams hw;
  std::int64_t skip_us = 0;
  int jobs = 1;
  /// Clean recording; when empty a moving-bar scene from `scene` is used.
  std::optional<EventStream> clean;
  SceneConfig scene;
};

struct SweepRow {
  std::string algo;
  int scale = 0;          // 0 for baselines
  int update_shift = 0;   // 0 for baselines
  double rate = 0;
  std::uint64_t seed = 0;
  std::uint64_t signal = 0;
  std::uint64_t noise = 0;
  double auroc = 0;
  double auprc = 0;

  std::string key() const;
};

/// Cartesian product of the grid; baselines ignore scale and shift and get one
/// cell per (rate, seed).
std::vector<SweepRow> sweep_cells(const SweepGrid& grid);

std::string sweep_csv_header();
std::string format_sweep_row(const SweepRow& row);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

/// Evaluates every cell of the grid not already present in `done`, then
/// returns all rows in canonical cell order followed by any `done` rows that
/// lie outside the grid.
std::vector<SweepRow> cmd_sweep(const SweepGrid& grid, const std::vector<SweepRow>& done = {});

/// Per (algo, scale, shift, seed) relative AUROC drop across rates, in percent.
struct StabilityRow {
  std::string algo;
  int scale = 0;
  int update_shift = 0;
  std::uint64_t seed = 0;
  double drop_percent = 0;
};
std::vector<StabilityRow> sweep_stability(const std::vector<SweepRow>& rows);

}  // namespace evfilt
