#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qshare/metrics.hpp"

namespace qshare::harness {

/// Consecutive optimal episodes that count as convergence.
inline constexpr int kConvergenceWindow = 20;

/// Episode index of the first episode that walked straight to s_n.
std::optional<int> first_optimal_episode(const RunMetrics& run, int chain_n);

/// True when the last `window` episodes all reached s_n in exactly n - 2 steps.
bool has_converged(const RunMetrics& run, int chain_n, int window = kConvergenceWindow);

struct AggregateReport {
  int chain_n = 0;
  /// Per-episode mean and population standard deviation of steps across runs.
  std::vector<double> mean_steps;
  std::vector<double> std_steps;
  /// Per-episode mean of the cumulative goal count.
  std::vector<double> mean_cumulative_goals;
  std::vector<int> goal_visits;
  double mean_goal_visits = 0.0;
  std::vector<bool> converged;
  std::vector<std::optional<int>> first_optimal;

  int runs() const { return static_cast<int>(goal_visits.size()); }
  double convergence_rate() const;
  /// Mean first-optimal episode; runs that never got there count as the
  /// episode budget.
  double mean_first_optimal_episode() const;
};

/// Throws std::invalid_argument when runs is empty or episode counts differ.
AggregateReport aggregate(std::span<const RunMetrics> runs, int chain_n);

}  // namespace qshare::harness
