#include "qshare/approx/multi_head_net.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qshare::approx {

void NetShape::validate() const {
  if (inputs < 1 || hidden < 1 || heads < 1) {
    throw std::invalid_argument("network dimensions must be positive");
  }
}

NetParams NetParams::zeros(const NetShape& shape) {
  shape.validate();
  NetParams p;
  p.shape = shape;
  p.trunk_w.assign(static_cast<std::size_t>(shape.hidden) * shape.inputs, 0.0);
  p.trunk_b.assign(static_cast<std::size_t>(shape.hidden), 0.0);
  p.head_w.assign(static_cast<std::size_t>(shape.heads) * kActions * shape.hidden, 0.0);
  p.head_b.assign(static_cast<std::size_t>(shape.heads) * kActions, 0.0);
  return p;
}

std::vector<std::span<double>> NetParams::blocks() { return {trunk_w, trunk_b, head_w, head_b}; }

std::vector<std::span<const double>> NetParams::blocks() const {
  return {trunk_w, trunk_b, head_w, head_b};
}

QValues forward(const NetParams& params, std::span<const std::vector<double>> states, TrunkCache* cache) {
  const auto& shape = params.shape;
  const int batch = static_cast<int>(states.size());
  const std::size_t width = static_cast<std::size_t>(shape.hidden);
  std::vector<double> pre(static_cast<std::size_t>(batch) * width);
  std::vector<double> hidden(pre.size());

  for (int b = 0; b < batch; ++b) {
    const auto& x = states[static_cast<std::size_t>(b)];
    if (x.size() != static_cast<std::size_t>(shape.inputs)) {
      throw std::invalid_argument("state width " + std::to_string(x.size()) + " does not match network input " +
                                  std::to_string(shape.inputs));
    }
    for (int j = 0; j < shape.hidden; ++j) {
      const double* w = params.trunk_w.data() + static_cast<std::size_t>(j) * shape.inputs;
      double z = params.trunk_b[static_cast<std::size_t>(j)];
      for (int i = 0; i < shape.inputs; ++i) {
        if (x[static_cast<std::size_t>(i)] != 0.0) z += w[i] * x[static_cast<std::size_t>(i)];
      }
      pre[b * width + j] = z;
      hidden[b * width + j] = z > 0.0 ? z : 0.0;
    }
  }

  QValues q(batch, shape.heads);
  for (int b = 0; b < batch; ++b) {
    const double* h = hidden.data() + b * width;
    for (int k = 0; k < shape.heads; ++k) {
      for (int a = 0; a < kActions; ++a) {
        const std::size_t row = static_cast<std::size_t>(k) * kActions + a;
        const double* w = params.head_w.data() + row * width;
        double out = params.head_b[row];
        for (int j = 0; j < shape.hidden; ++j) out += w[j] * h[j];
        q.at(b, k, a) = out;
      }
    }
  }

  if (cache != nullptr) {
    cache->pre = std::move(pre);
    cache->hidden = std::move(hidden);
  }
  return q;
}

MultiHeadNet::MultiHeadNet(const NetShape& shape) : online_(NetParams::zeros(shape)), target_(online_) {}

MultiHeadNet MultiHeadNet::initialise(const NetShape& shape, Rng& rng) {
  MultiHeadNet net(shape);
  NetParams& p = net.online_;
  const double trunk_bound = 1.0 / std::sqrt(static_cast<double>(shape.inputs));
  for (double& w : p.trunk_w) w = rng.uniform(-trunk_bound, trunk_bound);
  const double head_bound = 1.0 / std::sqrt(static_cast<double>(shape.hidden));
  for (double& w : p.head_w) w = rng.uniform(-head_bound, head_bound);
  net.sync_target();
  return net;
}

QValues MultiHeadNet::forward(std::span<const std::vector<double>> states) const {
  return approx::forward(online_, states);
}

QValues MultiHeadNet::forward_target(std::span<const std::vector<double>> states) const {
  return approx::forward(target_, states);
}

void grad_step(MultiHeadNet& net, const Gradients& grad, double learning_rate) {
  if (!(grad.values.shape == net.shape())) throw std::invalid_argument("gradient shape does not match network");
  const double expected_scale = 1.0 / static_cast<double>(net.heads());
  if (grad.trunk_scale != expected_scale) {
    throw std::logic_error("trunk gradient must be normalised by 1/K before the update");
  }
  const auto grads = grad.values.blocks();
  for (const auto& block : grads) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (!std::isfinite(block[i])) {
        throw std::runtime_error("non-finite gradient entry " + std::to_string(i) + " (value " +
                                 std::to_string(block[i]) + "); aborting run");
      }
    }
  }
  auto params = net.online().blocks();
  for (std::size_t b = 0; b < params.size(); ++b) {
    for (std::size_t i = 0; i < params[b].size(); ++i) params[b][i] -= learning_rate * grads[b][i];
  }
}

}  // namespace qshare::approx
