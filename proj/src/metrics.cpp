#include "evfilt/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace evfilt {

namespace {

struct Ranked {
  double score;
  bool signal;
};

struct Sweep {
  std::vector<Ranked> items;
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

Sweep prepare(const std::vector<ScoredEvent>& scored, const MetricOptions& opt) {
  Sweep s;
  s.items.reserve(scored.size());
  for (const ScoredEvent& e : scored) {
    if (e.event.t < opt.skip_us) continue;
    if (std::isnan(e.score)) throw MetricError("NaN score");
    const bool signal = !e.event.is_noise();
    s.items.push_back({e.score, signal});
    (signal ? s.pos : s.neg) += 1;
  }
  if (s.pos == 0 || s.neg == 0) {
    throw MetricError("need both signal and noise events (got " + std::to_string(s.pos) +
                      " signal, " + std::to_string(s.neg) + " noise)");
  }
  std::sort(s.items.begin(), s.items.end(),
            [](const Ranked& a, const Ranked& b) { return a.score < b.score; });
  return s;
}

/// Calls fn(tp, fp) after each group of tied scores, in ascending score order.
template <class Fn>
void for_each_threshold(const Sweep& s, Fn fn) {
  std::uint64_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < s.items.size();) {
    std::size_t j = i;
    while (j < s.items.size() && s.items[j].score == s.items[i].score) {
      (s.items[j].signal ? tp : fp) += 1;
      ++j;
    }
    fn(tp, fp);
    i = j;
  }
}

}  // namespace

RocCurve roc_from_scores(const std::vector<ScoredEvent>& scored, const MetricOptions& opt) {
  const Sweep s = prepare(scored, opt);
  RocCurve roc;
  roc.points.push_back({0.0, 0.0});
  // Twice the area in units of (pos * neg), accumulated exactly.
  unsigned __int128 twice_area = 0;
  std::uint64_t prev_tp = 0, prev_fp = 0;
  const double P = static_cast<double>(s.pos), N = static_cast<double>(s.neg);
  for_each_threshold(s, [&](std::uint64_t tp, std::uint64_t fp) {
    twice_area += static_cast<unsigned __int128>(fp - prev_fp) * (tp + prev_tp);
    roc.points.push_back({static_cast<double>(fp) / N, static_cast<double>(tp) / P});
    prev_tp = tp;
    prev_fp = fp;
  });
  roc.auroc = static_cast<double>(twice_area) / (2.0 * P * N);
  return roc;
}

PrCurve auprc_from_scores(const std::vector<ScoredEvent>& scored, const MetricOptions& opt) {
  const Sweep s = prepare(scored, opt);
  PrCurve pr;
  pr.points.push_back({0.0, 1.0});
  const double P = static_cast<double>(s.pos);
  for_each_threshold(s, [&](std::uint64_t tp, std::uint64_t fp) {
    const double recall = static_cast<double>(tp) / P;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const CurvePoint& prev = pr.points.back();
    pr.auprc += (recall - prev.x) * (precision + prev.y) * 0.5;
    pr.points.push_back({recall, precision});
  });
  return pr;
}

Sparsity sparsity(const EventStream& stream, std::int64_t window_us, std::int64_t duration_us) {
  if (window_us <= 0) throw ConfigError("sparsity window must be positive");
  const std::size_t pixels = static_cast<std::size_t>(stream.width) * stream.height;
  if (pixels == 0) throw ConfigError("sensor geometry must be non-zero");
  std::int64_t end = std::max<std::int64_t>(duration_us, stream.empty() ? 0 : stream.events.back().t + 1);
  const auto windows = static_cast<std::size_t>(std::max<std::int64_t>(1, (end + window_us - 1) / window_us));

  Sparsity out;
  out.per_window.assign(windows, 1.0);
  std::vector<std::uint32_t> stamp(pixels, 0);  // window index + 1 of the last hit
  std::vector<std::size_t> occupied(windows, 0);
  for (const Event& e : stream.events) {
    const auto w = static_cast<std::size_t>(e.t / window_us);
    const std::size_t pix = static_cast<std::size_t>(e.y) * stream.width + e.x;
    if (stamp[pix] != w + 1) {
      stamp[pix] = static_cast<std::uint32_t>(w + 1);
      ++occupied[w];
    }
  }
  double sum = 0;
  for (std::size_t w = 0; w < windows; ++w) {
    out.per_window[w] = 1.0 - static_cast<double>(occupied[w]) / static_cast<double>(pixels);
    sum += out.per_window[w];
  }
  out.mean = sum / static_cast<double>(windows);
  std::vector<double> sorted = out.per_window;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  out.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return out;
}

double stability(const std::map<double, double>& auroc_by_rate) {
  if (auroc_by_rate.size() < 2) throw MetricError("stability needs at least two noise rates");
  double lo = 1.0, hi = 0.0;
  for (const auto& [rate, a] : auroc_by_rate) {
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (hi <= 0) throw MetricError("stability undefined when every AUROC is zero");
  return (hi - lo) / hi * 100.0;
}

}  // namespace evfilt
