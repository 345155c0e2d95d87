#pragma once

#include <span>
#include <vector>

#include "qshare/envs/chain.hpp"
#include "qshare/rng.hpp"

namespace qshare::tabular {

using envs::Action;
using envs::State;

/// Dense n x 4 table of action values, addressed by 1-based chain state.
class QTable {
 public:
  QTable() = default;
  explicit QTable(int n_states, double fill = 0.0);

  /// Every entry drawn i.i.d. uniform in [low, high).
  static QTable uniform_noise(int n_states, double low, double high, Rng& rng);

  int state_count() const { return n_states_; }

  double& at(State s, Action a) { return values_[offset(s) + envs::to_index(a)]; }
  double at(State s, Action a) const { return values_[offset(s) + envs::to_index(a)]; }

  std::span<const double, envs::kActionCount> row(State s) const {
    return std::span<const double, envs::kActionCount>(values_.data() + offset(s), envs::kActionCount);
  }

  /// First maximal action in JumpToS1, Right, Left, NoOp order.
  Action argmax(State s) const;
  double max(State s) const;

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t offset(State s) const {
    return static_cast<std::size_t>(s.index - 1) * envs::kActionCount;
  }

  int n_states_ = 0;
  std::vector<double> values_;
};

}  // namespace qshare::tabular
