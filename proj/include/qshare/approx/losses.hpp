#pragma once

#include <span>

#include "qshare/approx/multi_head_net.hpp"
#include "qshare/approx/replay_buffer.hpp"

namespace qshare::approx {

/// Loss value plus gradients. The target network is treated as a
/// constant, so gradients exist only for the online parameters.
struct LossResult {
  double loss = 0.0;
  Gradients grad;
};

/// mean (r + gamma * max_a' Q(s',a'; target) - Q(s,a))^2. Single-head nets only.
LossResult dqn_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma);

/// As dqn_loss, but a* comes from the online net and is evaluated in the
/// target net. Single-head nets only.
LossResult ddqn_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma);

/// Sum over heads of each head's double-Q loss (own online argmax, own target
/// value). Trunk gradients are divided by K after aggregation.
LossResult bootstrapped_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma);

/// Every head k uses a* = argmax of the advising head's online output and
/// evaluates it in its own target head.
LossResult shared_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma,
                       int advising_head);

/// Per-head advisors: head k takes its greedy action from advisors[k].
LossResult shared_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma,
                       std::span<const int> advisors);

}  // namespace qshare::approx
