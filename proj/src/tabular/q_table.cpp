#include "qshare/tabular/q_table.hpp"

#include <stdexcept>

namespace qshare::tabular {

QTable::QTable(int n_states, double fill)
    : n_states_(n_states),
      values_(static_cast<std::size_t>(n_states) * envs::kActionCount, fill) {
  if (n_states < 1) throw std::invalid_argument("QTable needs at least one state");
}

QTable QTable::uniform_noise(int n_states, double low, double high, Rng& rng) {
  QTable table(n_states);
  for (double& v : table.values_) v = rng.uniform(low, high);
  return table;
}

Action QTable::argmax(State s) const {
  const auto r = row(s);
  int best = 0;
  for (int a = 1; a < envs::kActionCount; ++a) {
    if (r[a] > r[best]) best = a;
  }
  return envs::action_from_index(best);
}

double QTable::max(State s) const { return at(s, argmax(s)); }

}  // namespace qshare::tabular
