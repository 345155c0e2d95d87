#pragma once

#include <span>

#include "qshare/metrics.hpp"

namespace qshare::harness {

struct MannWhitneyResult {
  /// U statistic of the first sample: pairs (a_i, b_j) with a_i > b_j,
  /// ties counting one half.
  double u = 0.0;
  double z = 0.0;
  /// One-sided p-value for "a tends to exceed b".
  double p_value = 0.5;
};

/// One-sided Mann-Whitney U test using mid-ranks, the tie-corrected normal
/// approximation and a 0.5 continuity correction. When every value is tied
/// the variance vanishes and p is 0.5.
MannWhitneyResult mann_whitney_greater(std::span<const double> a, std::span<const double> b);

/// Mann-Whitney on per-run goal-visitation counts, testing a > b.
MannWhitneyResult compare(std::span<const RunMetrics> a, std::span<const RunMetrics> b);

}  // namespace qshare::harness
