#include "qshare/harness/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qshare::harness {

MannWhitneyResult mann_whitney_greater(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Mann-Whitney needs two non-empty samples");
  const std::size_t n_a = a.size();
  const std::size_t n_b = b.size();
  const std::size_t total = n_a + n_b;

  std::vector<double> pooled;
  pooled.reserve(total);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });

  std::vector<double> ranks(total);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j + 1 < total && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid_rank;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }

  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < n_a; ++i) rank_sum_a += ranks[i];

  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double n = static_cast<double>(total);
  MannWhitneyResult result;
  result.u = rank_sum_a - na * (na + 1.0) / 2.0;

  const double mean = na * nb / 2.0;
  const double variance = na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(variance > 0.0)) {
    result.z = 0.0;
    result.p_value = 0.5;
    return result;
  }
  result.z = (result.u - mean - 0.5) / std::sqrt(variance);
  result.p_value = 0.5 * std::erfc(result.z / std::sqrt(2.0));
  return result;
}

MannWhitneyResult compare(std::span<const RunMetrics> a, std::span<const RunMetrics> b) {
  auto visits = [](std::span<const RunMetrics> runs) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto& r : runs) v.push_back(static_cast<double>(r.goal_visits()));
    return v;
  };
  const auto va = visits(a);
  const auto vb = visits(b);
  return mann_whitney_greater(va, vb);
}

}  // namespace qshare::harness
