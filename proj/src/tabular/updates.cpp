#include "qshare/tabular/updates.hpp"

#include <array>
#include <stdexcept>

namespace qshare::tabular {

namespace {

bool trains(HeadMask mask, int k) { return mask.empty() || mask[static_cast<std::size_t>(k)]; }

void check_head(const EnsembleTables& ens, int head) {
  if (head < 0 || head >= ens.size()) throw std::out_of_range("head index outside the ensemble");
}

}  // namespace

EnsembleTables make_ensemble(int k, int n_states, double low, double high, Rng& rng) {
  if (k < 1) throw std::invalid_argument("ensemble needs at least one head");
  EnsembleTables ens;
  ens.heads.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) ens.heads.push_back(QTable::uniform_noise(n_states, low, high, rng));
  return ens;
}

void q_update(QTable& table, const Transition& t, double alpha, double gamma) {
  const double bootstrap = t.terminal ? 0.0 : gamma * table.max(t.next_state);
  double& q = table.at(t.state, t.action);
  q += alpha * (t.reward + bootstrap - q);
}

void double_q_update(QTable& a, QTable& b, const Transition& t, double alpha, double gamma, Rng& rng) {
  const bool update_a = rng.bernoulli(0.5);
  QTable& learner = update_a ? a : b;
  const QTable& evaluator = update_a ? b : a;
  const double bootstrap =
      t.terminal ? 0.0 : gamma * evaluator.at(t.next_state, learner.argmax(t.next_state));
  double& q = learner.at(t.state, t.action);
  q += alpha * (t.reward + bootstrap - q);
}

void bootstrap_update(EnsembleTables& ens, const Transition& t, double alpha, double gamma,
                      HeadMask mask) {
  for (int k = 0; k < ens.size(); ++k) {
    if (!trains(mask, k)) continue;
    QTable& head = ens.heads[static_cast<std::size_t>(k)];
    const double bootstrap = t.terminal ? 0.0 : gamma * head.at(t.next_state, head.argmax(t.next_state));
    double& q = head.at(t.state, t.action);
    q += alpha * (t.reward + bootstrap - q);
  }
}

void advised_update(EnsembleTables& ens, const Transition& t, double alpha, double gamma,
                    int advisor, HeadMask mask) {
  check_head(ens, advisor);
  // The advisor's greedy action is fixed before any head (the advisor
  // included) is modified by this transition.
  const Action advice = t.terminal ? Action::NoOp
                                   : ens.heads[static_cast<std::size_t>(advisor)].argmax(t.next_state);
  for (int k = 0; k < ens.size(); ++k) {
    if (!trains(mask, k)) continue;
    QTable& head = ens.heads[static_cast<std::size_t>(k)];
    const double bootstrap = t.terminal ? 0.0 : gamma * head.at(t.next_state, advice);
    double& q = head.at(t.state, t.action);
    q += alpha * (t.reward + bootstrap - q);
  }
}

void shared_update(EnsembleTables& ens, const Transition& t, double alpha, double gamma,
                   HeadMask mask) {
  advised_update(ens, t, alpha, gamma, ens.best_head, mask);
}

void random_head_update(EnsembleTables& ens, const Transition& t, double alpha, double gamma,
                        HeadMask mask) {
  advised_update(ens, t, alpha, gamma, ens.random_head, mask);
}

int select_best_head(const EnsembleTables& ens, State s, Action a) {
  int best = 0;
  for (int k = 1; k < ens.size(); ++k) {
    if (ens.heads[static_cast<std::size_t>(k)].at(s, a) > ens.heads[static_cast<std::size_t>(best)].at(s, a)) {
      best = k;
    }
  }
  return best;
}

int sample_active_head(int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("ensemble needs at least one head");
  return static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
}

Action greedy_action(std::span<const double, envs::kActionCount> row, Rng& rng) {
  std::array<int, envs::kActionCount> ties{};
  int count = 0;
  double best = row[0];
  for (int a = 0; a < envs::kActionCount; ++a) {
    if (row[a] > best) {
      best = row[a];
      count = 0;
    }
    if (row[a] == best) ties[count++] = a;
  }
  if (count == 1) return envs::action_from_index(ties[0]);
  return envs::action_from_index(ties[rng.uniform_index(static_cast<std::size_t>(count))]);
}

}  // namespace qshare::tabular
