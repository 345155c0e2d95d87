#include "qshare/harness/aggregate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qshare::harness {

namespace {

bool is_optimal(const EpisodeRecord& e, int chain_n) { return e.reached_goal && e.steps == chain_n - 2; }

}  // namespace

std::optional<int> first_optimal_episode(const RunMetrics& run, int chain_n) {
  for (std::size_t i = 0; i < run.episodes.size(); ++i) {
    if (is_optimal(run.episodes[i], chain_n)) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool has_converged(const RunMetrics& run, int chain_n, int window) {
  if (static_cast<int>(run.episodes.size()) < window) return false;
  for (std::size_t i = run.episodes.size() - static_cast<std::size_t>(window); i < run.episodes.size(); ++i) {
    if (!is_optimal(run.episodes[i], chain_n)) return false;
  }
  return true;
}

double AggregateReport::convergence_rate() const {
  if (converged.empty()) return 0.0;
  int count = 0;
  for (bool c : converged) count += c ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(converged.size());
}

double AggregateReport::mean_first_optimal_episode() const {
  if (first_optimal.empty()) return 0.0;
  const double budget = static_cast<double>(mean_steps.size());
  double sum = 0.0;
  for (const auto& f : first_optimal) sum += f ? static_cast<double>(*f) : budget;
  return sum / static_cast<double>(first_optimal.size());
}

AggregateReport aggregate(std::span<const RunMetrics> runs, int chain_n) {
  if (runs.empty()) throw std::invalid_argument("aggregate needs at least one run");
  const std::size_t episodes = runs.front().episodes.size();
  for (const auto& r : runs) {
    if (r.episodes.size() != episodes) {
      throw std::invalid_argument("run " + std::to_string(r.run) + " has " + std::to_string(r.episodes.size()) +
                                  " episodes, expected " + std::to_string(episodes));
    }
  }

  AggregateReport report;
  report.chain_n = chain_n;
  report.mean_steps.assign(episodes, 0.0);
  report.std_steps.assign(episodes, 0.0);
  report.mean_cumulative_goals.assign(episodes, 0.0);
  const double count = static_cast<double>(runs.size());

  for (std::size_t i = 0; i < episodes; ++i) {
    double sum = 0.0;
    for (const auto& r : runs) sum += r.episodes[i].steps;
    const double mean = sum / count;
    double sq = 0.0;
    for (const auto& r : runs) {
      const double d = r.episodes[i].steps - mean;
      sq += d * d;
    }
    report.mean_steps[i] = mean;
    report.std_steps[i] = std::sqrt(sq / count);
  }

  double goal_sum = 0.0;
  for (const auto& r : runs) {
    int cumulative = 0;
    for (std::size_t i = 0; i < episodes; ++i) {
      cumulative += r.episodes[i].reached_goal ? 1 : 0;
      report.mean_cumulative_goals[i] += cumulative;
    }
    report.goal_visits.push_back(cumulative);
    goal_sum += cumulative;
    report.converged.push_back(has_converged(r, chain_n));
    report.first_optimal.push_back(first_optimal_episode(r, chain_n));
  }
  for (double& g : report.mean_cumulative_goals) g /= count;
  report.mean_goal_visits = goal_sum / count;
  return report;
}

}  // namespace qshare::harness
