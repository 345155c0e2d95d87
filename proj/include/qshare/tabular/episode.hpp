#pragma once

#include "qshare/envs/chain.hpp"
#include "qshare/tabular/agents.hpp"

namespace qshare::tabular {

struct EpisodeStats {
  int steps = 0;
  double total_reward = 0.0;
  bool reached_goal = false;
  /// Ended by the step cap rather than a terminal state.
  bool truncated = false;
};

/// Plays one episode, training the agent online on every transition.
EpisodeStats run_episode(TabularAgent& agent, envs::Environment& env);

}  // namespace qshare::tabular
