#pragma once

#include <vector>

namespace qshare {

struct EpisodeRecord {
  int episode = 0;
  int steps = 0;
  double total_reward = 0.0;
  bool reached_goal = false;

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

/// Per-episode measurements of one seeded run.
struct RunMetrics {
  int run = 0;
  std::vector<EpisodeRecord> episodes;

  int goal_visits() const {
    int count = 0;
    for (const auto& e : episodes) count += e.reached_goal ? 1 : 0;
    return count;
  }

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

}  // namespace qshare
