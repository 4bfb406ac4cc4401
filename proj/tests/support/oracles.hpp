#pragma once

// Slow reference implementations used as test oracles.

#include <cmath>
#include <set>
#include <vector>

#include "evfilt/scored.hpp"

namespace evfilt::testing {

struct BruteCurves {
  double auroc = 0;
  double auprc = 0;
};

/// Re-counts every threshold from scratch: pass iff score <= each distinct
/// score, plus the empty threshold. Trapezoids in long double.
inline BruteCurves brute_force_curves(const std::vector<ScoredEvent>& scored) {
  std::set<double> distinct;
  for (const auto& s : scored) distinct.insert(s.score);
  std::vector<double> th{-INFINITY};
  for (double v : distinct) th.push_back(std::nextafter(v, INFINITY));
  long double pos = 0, neg = 0;
  for (const auto& s : scored) (s.event.is_noise() ? neg : pos) += 1;
  BruteCurves b;
  long double auroc = 0, auprc = 0;
  long double px = 0, py = 0, rx = 0, ry = 1;
  for (double theta : th) {
    long double tp = 0, fp = 0;
    for (const auto& s : scored) {
      if (s.score < theta) (s.event.is_noise() ? fp : tp) += 1;
    }
    const long double x = fp / neg, y = tp / pos;
    auroc += (x - px) * (y + py) / 2;
    px = x;
    py = y;
    if (tp + fp > 0) {
      const long double recall = tp / pos, precision = tp / (tp + fp);
      auprc += (recall - rx) * (precision + ry) / 2;
      rx = recall;
      ry = precision;
    }
  }
  b.auroc = static_cast<double>(auroc);
  b.auprc = static_cast<double>(auprc);
  return b;
}

}  // namespace evfilt::testing
