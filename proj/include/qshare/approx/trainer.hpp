#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qshare/approx/losses.hpp"
#include "qshare/approx/multi_head_net.hpp"
#include "qshare/envs/chain.hpp"
#include "qshare/metrics.hpp"

namespace qshare::approx {

enum class AgentKind {
  DQN,
  DDQN,
  Bootstrapped,
  /// Bootstrapped with a uniformly drawn advising head (ablation).
  RandomHeadBootstrapped,
  SharedBootstrapped,
  EnsembleVoting,
  SharedEnsembleVoting,
};

std::string_view to_string(AgentKind kind);
bool is_single_head(AgentKind kind);

struct TrainConfig {
  int batch_size = 32;
  double learning_rate = 0.02;
  std::int64_t target_sync_interval = 500;
  std::int64_t train_interval = 4;
  std::int64_t select_best_int = 500;
  int buffer_capacity = 10000;
  std::int64_t total_steps = 50000;
  int heads = 10;
  int hidden = 64;
  double gamma = 0.99;
  /// Linear epsilon schedule, applied on top of every agent kind's policy.
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::int64_t epsilon_decay_steps = 10000;
  /// Bernoulli head mask; 1 trains every head on every sample.
  double mask_prob = 1.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on a non-positive or out-of-range field.
  void validate() const;
};

struct TrainResult {
  RunMetrics metrics;
  MultiHeadNet net;
  /// Advising head chosen at each refresh (shared and random-head kinds).
  std::vector<int> advisor_history;
  std::int64_t gradient_steps = 0;
};

/// Runs the act/store/sample/train loop for cfg.total_steps environment
/// steps. Only completed episodes are recorded.
TrainResult train(AgentKind kind, envs::Environment& env, const TrainConfig& cfg);

/// Plays one exploration-free episode: greedy on the single head, or the
/// majority vote for ensembles.
EpisodeRecord evaluate_greedy(AgentKind kind, const MultiHeadNet& net, envs::Environment& env, Rng& rng);

}  // namespace qshare::approx
