#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qshare/tabular/q_table.hpp"

namespace qshare::tabular {

/// One observed step. `terminal` means the next state is absorbing, so the
/// bootstrap term is dropped; a step-cap truncation is not terminal here.
struct Transition {
  State state;
  Action action = Action::NoOp;
  double reward = 0.0;
  State next_state;
  bool terminal = false;
};

/// K independent tables plus the head bookkeeping used by the ensemble agents.
/// Head indices are 0-based.
struct EnsembleTables {
  std::vector<QTable> heads;
  int active_head = 0;
  int best_head = 0;
  /// Advising head of the random-head ablation.
  int random_head = 0;
  std::int64_t step_count = 0;

  int size() const { return static_cast<int>(heads.size()); }
};

/// Builds K tables, each filled with its own uniform [low, high] draws.
EnsembleTables make_ensemble(int k, int n_states, double low, double high, Rng& rng);

/// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)).
void q_update(QTable& table, const Transition& t, double alpha, double gamma);

/// Coin-flip Double Q-learning: the chosen table picks a* and the other
/// table evaluates it.
void double_q_update(QTable& a, QTable& b, const Transition& t, double alpha, double gamma, Rng& rng);

/// Per-head mask for a transition. Empty span means every head trains.
using HeadMask = std::span<const std::uint8_t>;

/// Every head bootstraps from its own greedy action.
void bootstrap_update(EnsembleTables& ens, const Transition& t, double alpha, double gamma,
                      HeadMask mask = {});

/// Every head k bootstraps from Q_k(s', a*) where a* is the greedy action
/// of `advisor` at s'.
void advised_update(EnsembleTables& ens, const Transition& t, double alpha, double gamma,
                    int advisor, HeadMask mask = {});

/// advised_update with the current best head as advisor.
void shared_update(EnsembleTables& ens, const Transition& t, double alpha, double gamma,
                   HeadMask mask = {});

/// advised_update with the current random head as advisor.
void random_head_update(EnsembleTables& ens, const Transition& t, double alpha, double gamma,
                        HeadMask mask = {});

/// argmax_k Q_k(s, a); ties go to the lowest head index.
int select_best_head(const EnsembleTables& ens, State s, Action a);

/// Uniform head index in [0, k).
int sample_active_head(int k, Rng& rng);

/// Uniformly random choice among the maximal entries of a row.
Action greedy_action(std::span<const double, envs::kActionCount> row, Rng& rng);

}  // namespace qshare::tabular
