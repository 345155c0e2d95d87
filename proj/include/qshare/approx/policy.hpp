#pragma once

#include <span>
#include <vector>

#include "qshare/approx/multi_head_net.hpp"
#include "qshare/envs/chain.hpp"

namespace qshare::approx {

using envs::Action;

/// First maximal action of one head's output row.
Action head_greedy_action(std::span<const double, kActions> row);

/// Modal action of the votes; ties between modal actions are broken
/// uniformly at random.
Action majority_vote(std::span<const Action> votes, Rng& rng);

/// Each head votes for its greedy action at `state`.
Action ensemble_vote(const MultiHeadNet& net, const std::vector<double>& state, Rng& rng);

/// argmax_k of the online Q_k(state, action); ties go to the lowest index.
int select_best_head_deep(const MultiHeadNet& net, const std::vector<double>& state, Action action);

}  // namespace qshare::approx
