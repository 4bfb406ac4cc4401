#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "evfilt/events.hpp"
#include "evfilt/scored.hpp"

namespace evfilt {

/// Raised when a metric is undefined for its input (e.g. a single class).
class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CurvePoint {
  double x = 0;
  double y = 0;
};

/// (fpr, tpr) from (0,0) to (1,1) as the pass threshold rises.
struct RocCurve {
  std::vector<CurvePoint> points;
  double auroc = 0;
};

/// (recall, precision) with an anchor of precision 1 at recall 0.
struct PrCurve {
  std::vector<CurvePoint> points;
  double auprc = 0;
};

/// Events with t < skip_us are left out (warm-up exclusion).
struct MetricOptions {
  std::int64_t skip_us = 0;
};

/// Sweeps "pass iff score < threshold" over every distinct score plus both
/// infinities. Polarity 0/1 is the positive (signal) class. O(n log n).
RocCurve roc_from_scores(const std::vector<ScoredEvent>& scored, const MetricOptions& opt = {});
PrCurve auprc_from_scores(const std::vector<ScoredEvent>& scored, const MetricOptions& opt = {});

struct Sparsity {
  double mean = 1.0;
  double median = 1.0;
  std::vector<double> per_window;
};

/// Fraction of pixels without events in each window [k*W, (k+1)*W). Windows run
/// from 0 to the later of the last event and `duration_us`.
Sparsity sparsity(const EventStream& stream, std::int64_t window_us = 20'000,
                  std::int64_t duration_us = 0);

/// (max - min) / max * 100 over AUROC values keyed by noise rate.
double stability(const std::map<double, double>& auroc_by_rate);

}  // namespace evfilt
