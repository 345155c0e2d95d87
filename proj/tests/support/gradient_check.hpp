#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qshare/approx/losses.hpp"
#include "qshare/approx/multi_head_net.hpp"
#include "qshare/approx/replay_buffer.hpp"
#include "qshare/rng.hpp"

namespace qshare::testing {

struct TinyProblem {
  approx::MultiHeadNet net;
  std::vector<approx::Transition> batch;
  double gamma = 0.9;
};

/// Random net with inputs <= 10, hidden <= 8, heads <= max_heads, batch <= 4,
/// dense random inputs and a target copy that differs from the online net.
TinyProblem random_tiny_problem(Rng& rng, int max_heads);

struct GradientReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst_relative = 0.0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

using LossFn = std::function<approx::LossResult(const approx::MultiHeadNet&)>;

/// Compares every analytic online-parameter gradient with a central
/// difference of the loss value. Trunk entries are compared after undoing
/// the reported trunk_scale, since the difference quotient sees the raw sum.
GradientReport check_gradients(const approx::MultiHeadNet& net, const LossFn& loss, double step = 1e-5,
                               double relative = 1e-4, double absolute_floor = 1e-8);

}  // namespace qshare::testing
