#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "evfilt/events.hpp"

namespace evfilt {

/// Continuous filter score plus the thresholded decision. Lower scores mean
/// stronger support, so an event passes when its score is below the filter length.
struct ScoredEvent {
  Event event;
  double score = 0.0;
  bool pass = false;

  friend bool operator==(const ScoredEvent&, const ScoredEvent&) = default;
};

/// "t,x,y,p,score,decision" with decision 1 = pass. Scores are written in
/// shortest round-trip form so reading them back is exact.
std::string encode_scores_csv(const std::vector<ScoredEvent>& scored);
std::vector<ScoredEvent> decode_scores_csv(const std::string& text);
void write_scores(const std::vector<ScoredEvent>& scored, const std::filesystem::path& path);
std::vector<ScoredEvent> read_scores(const std::filesystem::path& path);

}  // namespace evfilt
