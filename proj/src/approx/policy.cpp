#include "qshare/approx/policy.hpp"

#include <array>
#include <stdexcept>

namespace qshare::approx {

Action head_greedy_action(std::span<const double, kActions> row) {
  int best = 0;
  for (int a = 1; a < kActions; ++a) {
    if (row[a] > row[best]) best = a;
  }
  return envs::action_from_index(best);
}

Action majority_vote(std::span<const Action> votes, Rng& rng) {
  if (votes.empty()) throw std::invalid_argument("majority vote needs at least one vote");
  std::array<int, kActions> counts{};
  for (Action a : votes) ++counts[static_cast<std::size_t>(envs::to_index(a))];
  int top = 0;
  for (int c : counts) top = c > top ? c : top;
  std::array<int, kActions> modal{};
  int n_modal = 0;
  for (int a = 0; a < kActions; ++a) {
    if (counts[static_cast<std::size_t>(a)] == top) modal[static_cast<std::size_t>(n_modal++)] = a;
  }
  if (n_modal == 1) return envs::action_from_index(modal[0]);
  return envs::action_from_index(modal[rng.uniform_index(static_cast<std::size_t>(n_modal))]);
}

Action ensemble_vote(const MultiHeadNet& net, const std::vector<double>& state, Rng& rng) {
  const QValues q = net.forward(std::span<const std::vector<double>>(&state, 1));
  std::vector<Action> votes;
  votes.reserve(static_cast<std::size_t>(net.heads()));
  for (int k = 0; k < net.heads(); ++k) votes.push_back(head_greedy_action(q.head_row(0, k)));
  return majority_vote(votes, rng);
}

int select_best_head_deep(const MultiHeadNet& net, const std::vector<double>& state, Action action) {
  const QValues q = net.forward(std::span<const std::vector<double>>(&state, 1));
  const int a = envs::to_index(action);
  int best = 0;
  for (int k = 1; k < net.heads(); ++k) {
    if (q.at(0, k, a) > q.at(0, best, a)) best = k;
  }
  return best;
}

}  // namespace qshare::approx
