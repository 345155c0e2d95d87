#include "qshare/approx/losses.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace qshare::approx {

namespace {

enum class TargetRule {
  /// max over the head's own target output
  TargetMax,
  /// argmax from an online head (own or advising), value from own target head
  OnlineArgmax,
};

int first_argmax(std::span<const double, kActions> row) {
  int best = 0;
  for (int a = 1; a < kActions; ++a) {
    if (row[a] > row[best]) best = a;
  }
  return best;
}

std::vector<std::vector<double>> gather(std::span<const Transition> batch, bool next) {
  std::vector<std::vector<double>> states;
  states.reserve(batch.size());
  for (const auto& t : batch) states.push_back(next ? t.next_state : t.state);
  return states;
}

// Shared core of every loss. advisors[k] names the online head whose greedy
// action head k bootstraps from (ignored for TargetMax).
LossResult td_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma,
                   TargetRule rule, std::span<const int> advisors) {
  const NetShape& shape = net.shape();
  const int heads = shape.heads;
  if (rule == TargetRule::OnlineArgmax && advisors.size() != static_cast<std::size_t>(heads)) {
    throw std::invalid_argument("need one advising head per head");
  }
  for (int m : advisors) {
    if (m < 0 || m >= heads) throw std::out_of_range("advising head index outside the ensemble");
  }

  LossResult result;
  result.grad.values = NetParams::zeros(shape);
  result.grad.trunk_scale = 1.0 / static_cast<double>(heads);
  if (batch.empty()) return result;

  const auto states = gather(batch, false);
  const auto next_states = gather(batch, true);
  TrunkCache cache;
  const QValues q = forward(net.online(), states, &cache);
  const QValues q_next_target = net.forward_target(next_states);
  const QValues q_next_online = rule == TargetRule::OnlineArgmax ? net.forward(next_states) : QValues(0, heads);

  const int batch_size = static_cast<int>(batch.size());
  const double inv_batch = 1.0 / static_cast<double>(batch_size);
  const std::size_t width = static_cast<std::size_t>(shape.hidden);
  NetParams& g = result.grad.values;
  std::vector<double> d_hidden(width);

  for (int b = 0; b < batch_size; ++b) {
    const Transition& t = batch[static_cast<std::size_t>(b)];
    if (t.action < 0 || t.action >= kActions) throw std::out_of_range("action index outside [0, 4)");
    std::fill(d_hidden.begin(), d_hidden.end(), 0.0);
    const double* h = cache.hidden.data() + b * width;

    for (int k = 0; k < heads; ++k) {
      if (!t.mask.empty() && !t.mask[static_cast<std::size_t>(k)]) continue;
      double bootstrap = 0.0;
      if (!t.terminal) {
        if (rule == TargetRule::TargetMax) {
          const int a_star = first_argmax(q_next_target.head_row(b, k));
          bootstrap = q_next_target.at(b, k, a_star);
        } else {
          const int a_star = first_argmax(q_next_online.head_row(b, advisors[static_cast<std::size_t>(k)]));
          bootstrap = q_next_target.at(b, k, a_star);
        }
      }
      const double td = q.at(b, k, t.action) - (t.reward + gamma * bootstrap);
      result.loss += td * td * inv_batch;

      const double dq = 2.0 * td * inv_batch;
      const std::size_t row = static_cast<std::size_t>(k) * kActions + t.action;
      double* gw = g.head_w.data() + row * width;
      const double* w = net.online().head_w.data() + row * width;
      for (std::size_t j = 0; j < width; ++j) {
        gw[j] += dq * h[j];
        d_hidden[j] += dq * w[j];
      }
      g.head_b[row] += dq;
    }

    const double* pre = cache.pre.data() + b * width;
    const auto& x = t.state;
    for (std::size_t j = 0; j < width; ++j) {
      if (pre[j] <= 0.0) continue;
      const double d = d_hidden[j];
      g.trunk_b[j] += d;
      double* gw = g.trunk_w.data() + j * static_cast<std::size_t>(shape.inputs);
      for (int i = 0; i < shape.inputs; ++i) gw[i] += d * x[static_cast<std::size_t>(i)];
    }
  }

  if (heads > 1) {
    for (double& v : g.trunk_w) v *= result.grad.trunk_scale;
    for (double& v : g.trunk_b) v *= result.grad.trunk_scale;
  }
  return result;
}

void require_single_head(const MultiHeadNet& net, const char* name) {
  if (net.heads() != 1) throw std::invalid_argument(std::string(name) + " needs a single-head network");
}

std::vector<int> own_heads(int heads) {
  std::vector<int> advisors(static_cast<std::size_t>(heads));
  for (int k = 0; k < heads; ++k) advisors[static_cast<std::size_t>(k)] = k;
  return advisors;
}

}  // namespace

LossResult dqn_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma) {
  require_single_head(net, "dqn_loss");
  return td_loss(net, batch, gamma, TargetRule::TargetMax, {});
}

LossResult ddqn_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma) {
  require_single_head(net, "ddqn_loss");
  const std::vector<int> own = own_heads(1);
  return td_loss(net, batch, gamma, TargetRule::OnlineArgmax, own);
}

LossResult bootstrapped_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma) {
  const std::vector<int> own = own_heads(net.heads());
  return td_loss(net, batch, gamma, TargetRule::OnlineArgmax, own);
}

LossResult shared_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma,
                       int advising_head) {
  const std::vector<int> advisors(static_cast<std::size_t>(net.heads()), advising_head);
  return td_loss(net, batch, gamma, TargetRule::OnlineArgmax, advisors);
}

LossResult shared_loss(const MultiHeadNet& net, std::span<const Transition> batch, double gamma,
                       std::span<const int> advisors) {
  return td_loss(net, batch, gamma, TargetRule::OnlineArgmax, advisors);
}

}  // namespace qshare::approx
