#include "evfilt/run.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "evfilt/baselines.hpp"
#include "evfilt/metrics.hpp"
#include "evfilt/noise.hpp"

namespace evfilt {

AlgoSpec AlgoSpec::parse(const std::string& name, int default_support) {
  AlgoSpec a;
  if (name == "dif") {
    a.kind = Kind::dif;
  } else if (name == "bif") {
    a.kind = Kind::bif;
  } else if (name == "dif-hw" || name == "difhw") {
    a.kind = Kind::dif_hw;
  } else if (name == "nnb") {
    a.kind = Kind::nnb;
    a.support = 1;
  } else if (name.rfind("stcf", 0) == 0) {
    a.kind = Kind::stcf;
    a.support = default_support;
    if (name.size() > 4) {
      int n = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 4, name.data() + name.size(), n);
      if (ec != std::errc() || ptr != name.data() + name.size()) {
        throw ConfigError("bad STCF algorithm name '" + name + "'");
      }
      a.support = n;
    }
    if (a.support < 1 || a.support > 8) throw ConfigError("STCF support must be in [1, 8]");
  } else {
    throw ConfigError("unknown algorithm '" + name + "' (dif|bif|dif-hw|nnb|stcf|stcfN)");
  }
  return a;
}

std::string AlgoSpec::name() const {
  switch (kind) {
    case Kind::dif: return "dif";
    case Kind::bif: return "bif";
    case Kind::dif_hw: return "dif-hw";
    case Kind::nnb: return "nnb";
    case Kind::stcf: return "stcf" + std::to_string(support);
  }
  return "?";
}

std::vector<ScoredEvent> run_filter(const EventStream& stream, const AlgoSpec& algo,
                                    const FilterConfig& cfg, const HwParams& hw) {
  switch (algo.kind) {
    case AlgoSpec::Kind::dif: return filter_stream(stream, cfg, Algo::dif);
    case AlgoSpec::Kind::bif: return filter_stream(stream, cfg, Algo::bif);
    case AlgoSpec::Kind::dif_hw: return hw_filter_stream(stream, cfg, hw);
    case AlgoSpec::Kind::nnb: return nnb_filter(stream, cfg.filter_length_us);
    case AlgoSpec::Kind::stcf: return stcf_filter(stream, algo.support, cfg.filter_length_us);
  }
  return {};
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::optional<std::string> file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return hex64(fnv1a64(ss.str()));
}

std::string BenchReport::to_text() const {
  std::ostringstream out;
  out << "algo=" << algo << '\n'
      << "events=" << events << '\n'
      << "passed=" << passed << '\n'
      << "seconds=" << seconds << '\n'
      << "meps=" << meps << '\n'
      << "output_digest=" << output_digest << '\n';
  if (hw_agreement) out << "hw_agreement=" << *hw_agreement << '\n';
  return out.str();
}

BenchReport cmd_bench(const EventStream& stream, const AlgoSpec& algo, const FilterConfig& cfg,
                      const HwParams& hw, bool compare_hw) {
  BenchReport r;
  r.algo = algo.name();
  r.events = stream.size();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<ScoredEvent> scored = run_filter(stream, algo, cfg, hw);
  const auto stop = std::chrono::steady_clock::now();
  r.seconds = std::chrono::duration<double>(stop - start).count();
  r.meps = r.seconds > 0 ? static_cast<double>(r.events) / r.seconds / 1e6 : 0.0;
  r.passed = static_cast<std::uint64_t>(
      std::count_if(scored.begin(), scored.end(), [](const ScoredEvent& s) { return s.pass; }));
  r.output_digest = hex64(fnv1a64(encode_scores_csv(scored)));
  if (compare_hw) {
    const auto reference = hw_filter_stream(stream, cfg, hw);
    std::uint64_t same = 0;
    for (std::size_t i = 0; i < scored.size(); ++i) same += scored[i].pass == reference[i].pass;
    r.hw_agreement = scored.empty() ? 1.0 : static_cast<double>(same) / static_cast<double>(scored.size());
  }
  return r;
}

EventStream synthetic_stream(std::uint64_t events, double noise_rate_hz, std::uint64_t seed) {
  SceneConfig scene;
  scene.seed = seed;
  // The default scene plus 1 Hz/px noise yields roughly 1.2M events per second.
  const double per_second = 1.0e6 + noise_rate_hz * scene.width * scene.height;
  scene.duration_us = std::max<std::int64_t>(
      scene.time_step_us, static_cast<std::int64_t>(static_cast<double>(events) / per_second * 1.3e6));
  for (;;) {
    const EventStream clean = generate_moving_bars(scene);
    NoiseConfig nc;
    nc.width = scene.width;
    nc.height = scene.height;
    nc.rate_hz = noise_rate_hz;
    nc.duration_us = scene.duration_us;
    nc.seed = seed ^ 0x9e3779b97f4a7c15ULL;
    EventStream mixed = merge_streams(clean, generate_noise(nc));
    if (mixed.size() >= events) {
      mixed.events.resize(events);
      return mixed;
    }
    scene.duration_us *= 2;
  }
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string fmt_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::int64_t stream_duration(const EventStream& s, std::int64_t step) {
  const std::int64_t end = s.empty() ? step : s.events.back().t + 1;
  return std::max(step, ((end + step - 1) / step) * step);
}

}  // namespace

std::string SweepRow::key() const {
  return algo + '|' + std::to_string(scale) + '|' + std::to_string(update_shift) + '|' +
         fmt_double(rate) + '|' + std::to_string(seed);
}

std::vector<SweepRow> sweep_cells(const SweepGrid& grid) {
  std::vector<SweepRow> cells;
  for (double rate : grid.rates) {
    for (std::uint64_t seed : grid.seeds) {
      for (const AlgoSpec& algo : grid.algos) {
        if (!algo.uses_areas()) {
          SweepRow r;
          r.algo = algo.name();
          r.rate = rate;
          r.seed = seed;
          cells.push_back(r);
          continue;
        }
        for (int scale : grid.scales) {
          for (int shift : grid.update_shifts) {
            SweepRow r;
            r.algo = algo.name();
            r.scale = scale;
            r.update_shift = shift;
            r.rate = rate;
            r.seed = seed;
            cells.push_back(r);
          }
        }
      }
    }
  }
  return cells;
}

std::string sweep_csv_header() { return "algo,scale,update_shift,rate,seed,signal,noise,auroc,auprc\n"; }

std::string format_sweep_row(const SweepRow& r) {
  return r.algo + ',' + std::to_string(r.scale) + ',' + std::to_string(r.update_shift) + ',' +
         fmt_double(r.rate) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.signal) + ',' +
         std::to_string(r.noise) + ',' + fmt_fixed(r.auroc) + ',' + fmt_fixed(r.auprc) + '\n';
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::vector<SweepRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line + '\n' != sweep_csv_header()) {
        throw FormatError(FormatError::Kind::bad_header, std::nullopt, "unexpected sweep header");
      }
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 9) {
      throw FormatError(FormatError::Kind::bad_record, index, "malformed sweep row");
    }
    try {
      SweepRow r;
      r.algo = f[0];
      r.scale = std::stoi(f[1]);
      r.update_shift = std::stoi(f[2]);
      r.rate = std::stod(f[3]);
      r.seed = std::stoull(f[4]);
      r.signal = std::stoull(f[5]);
      r.noise = std::stoull(f[6]);
      r.auroc = std::stod(f[7]);
      r.auprc = std::stod(f[8]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw FormatError(FormatError::Kind::bad_record, index, "malformed sweep row");
    }
    ++index;
  }
  return rows;
}

std::vector<SweepRow> cmd_sweep(const SweepGrid& grid, const std::vector<SweepRow>& done) {
  const std::vector<SweepRow> cells = sweep_cells(grid);
  std::map<std::string, SweepRow> finished;
  for (const SweepRow& r : done) finished[r.key()] = r;

  // Group pending cells by (rate, seed) so each noisy stream is built once.
  std::map<std::pair<double, std::uint64_t>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!finished.count(cells[i].key())) groups[{cells[i].rate, cells[i].seed}].push_back(i);
  }
  std::vector<std::pair<std::pair<double, std::uint64_t>, std::vector<std::size_t>>> work(groups.begin(),
                                                                                          groups.end());

  std::vector<SweepRow> results = cells;
  const EventStream clean = grid.clean ? *grid.clean : generate_moving_bars(grid.scene);

  auto run_group = [&](std::size_t g) {
    const auto& [key, members] = work[g];
    NoiseConfig nc;
    nc.width = clean.width;
    nc.height = clean.height;
    nc.rate_hz = key.first;
    nc.seed = key.second;
    nc.duration_us = stream_duration(clean, nc.time_step_us);
    const EventStream mixed = merge_streams(clean, generate_noise(nc));
    for (std::size_t idx : members) {
      SweepRow& row = results[idx];
      FilterConfig cfg = grid.base;
      if (row.scale) cfg.scale = row.scale;
      if (row.scale) cfg.update_shift = row.update_shift;
      const auto scored = run_filter(mixed, AlgoSpec::parse(row.algo), cfg, grid.hw);
      MetricOptions mo{grid.skip_us};
      const RocCurve roc = roc_from_scores(scored, mo);
      const PrCurve pr = auprc_from_scores(scored, mo);
      row.auroc = roc.auroc;
      row.auprc = pr.auprc;
      row.signal = row.noise = 0;
      for (const ScoredEvent& s : scored) {
        if (s.event.t < grid.skip_us) continue;
        (s.event.is_noise() ? row.noise : row.signal) += 1;
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(grid.jobs, work.size()));
  if (jobs <= 1) {
    for (std::size_t g = 0; g < work.size(); ++g) run_group(g);
  } else {
    std::mutex m;
    std::size_t next = 0;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t g;
          {
            std::lock_guard lock(m);
            if (next >= work.size() || failure) return;
            g = next++;
          }
          try {
            run_group(g);
          } catch (...) {
            std::lock_guard lock(m);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (SweepRow& r : results) {
    if (auto it = finished.find(r.key()); it != finished.end()) {
      r = it->second;
      finished.erase(it);
    }
  }
  // Rows from earlier runs over other grids are kept after the current grid.
  for (const SweepRow& r : done) {
    if (finished.erase(r.key())) results.push_back(r);
  }
  return results;
}

std::vector<StabilityRow> sweep_stability(const std::vector<SweepRow>& rows) {
  std::map<std::tuple<std::string, int, int, std::uint64_t>, std::map<double, double>> by_config;
  for (const SweepRow& r : rows) by_config[{r.algo, r.scale, r.update_shift, r.seed}][r.rate] = r.auroc;
  std::vector<StabilityRow> out;
  for (const auto& [k, rates] : by_config) {
    if (rates.size() < 2) continue;
    out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), stability(rates)});
  }
  return out;
}

}  // namespace evfilt
