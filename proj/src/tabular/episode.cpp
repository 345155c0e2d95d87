#include "qshare/tabular/episode.hpp"

namespace qshare::tabular {

EpisodeStats run_episode(TabularAgent& agent, envs::Environment& env) {
  EpisodeStats stats;
  State s = env.reset();
  agent.begin_episode();
  for (;;) {
    const Action a = agent.act(s);
    const envs::StepResult r = env.step(a);
    agent.observe(Transition{s, a, r.reward, r.next_state, r.terminal && !r.truncated});
    ++stats.steps;
    stats.total_reward += r.reward;
    s = r.next_state;
    if (r.terminal) {
      stats.truncated = r.truncated;
      break;
    }
  }
  stats.reached_goal = stats.total_reward > 0.0;
  return stats;
}

}  // namespace qshare::tabular
