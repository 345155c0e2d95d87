#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "qshare/tabular/updates.hpp"

namespace qshare::tabular {

/// Defaults are the single configuration tuned on the chain and then frozen
/// for every chain length.
struct AgentConfig {
  double alpha = 0.6;
  double gamma = 0.999;
  /// Used by the Q-learning and Double Q-learning baselines only.
  double epsilon = 0.1;
  int heads = 2;
  int select_best_int = 100;
  /// Probability that a head trains on a given transition; 1 disables masking.
  double mask_prob = 1.0;
  /// Heads start with entries drawn uniformly from [init_low, init_high].
  /// A range reaching below zero lets self-loops look attractive before any
  /// reward is seen, which stalls the greedy heads.
  double init_low = 0.002;
  double init_high = 0.01;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;
};

enum class EnsembleRule { Bootstrap, RandomHead, Shared };

class TabularAgent {
 public:
  virtual ~TabularAgent() = default;
  virtual void begin_episode() = 0;
  virtual Action act(State s) = 0;
  virtual void observe(const Transition& t) = 0;
};

class QLearningAgent final : public TabularAgent {
 public:
  QLearningAgent(int n_states, const AgentConfig& cfg);

  void begin_episode() override {}
  Action act(State s) override;
  void observe(const Transition& t) override;

  const QTable& table() const { return table_; }
  QTable& table() { return table_; }

 private:
  AgentConfig cfg_;
  Rng rng_;
  QTable table_;
};

class DoubleQAgent final : public TabularAgent {
 public:
  DoubleQAgent(int n_states, const AgentConfig& cfg);

  void begin_episode() override {}
  /// epsilon-greedy on the sum of both tables.
  Action act(State s) override;
  void observe(const Transition& t) override;

  const QTable& table_a() const { return a_; }
  const QTable& table_b() const { return b_; }

 private:
  AgentConfig cfg_;
  Rng rng_;
  QTable a_;
  QTable b_;
};

/// Bootstrap, Random Head and Shared Learning agents. One head is sampled
/// per episode and its greedy policy is followed for the whole episode.
/// The advising head (best or random) is refreshed every select_best_int
/// environment steps, counted across episodes.
class EnsembleAgent final : public TabularAgent {
 public:
  EnsembleAgent(int n_states, const AgentConfig& cfg, EnsembleRule rule);

  void begin_episode() override;
  Action act(State s) override;
  void observe(const Transition& t) override;

  EnsembleRule rule() const { return rule_; }
  const EnsembleTables& ensemble() const { return ens_; }
  EnsembleTables& ensemble() { return ens_; }

 private:
  AgentConfig cfg_;
  EnsembleRule rule_;
  Rng rng_;
  EnsembleTables ens_;
  std::vector<std::uint8_t> mask_;
};

enum class TabularAlgorithm { QLearning, DoubleQ, Bootstrap, RandomHead, Shared };

std::string_view to_string(TabularAlgorithm algo);
std::unique_ptr<TabularAgent> make_agent(TabularAlgorithm algo, int n_states, const AgentConfig& cfg);

}  // namespace qshare::tabular
