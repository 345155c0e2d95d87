#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qshare/rng.hpp"

namespace qshare::approx {

inline constexpr int kActions = 4;

struct NetShape {
  int inputs = 0;
  int hidden = 0;
  int heads = 1;

  void validate() const;
  friend bool operator==(const NetShape&, const NetShape&) = default;
};

/// Parameters (or gradients) of a trunk + K-head network.
///
/// trunk_w is hidden x inputs, head_w is heads x kActions x hidden, all
/// row-major.
struct NetParams {
  NetShape shape;
  std::vector<double> trunk_w;
  std::vector<double> trunk_b;
  std::vector<double> head_w;
  std::vector<double> head_b;

  static NetParams zeros(const NetShape& shape);

  double& trunk_weight(int unit, int input) {
    return trunk_w[static_cast<std::size_t>(unit) * shape.inputs + input];
  }
  double& head_weight(int head, int action, int unit) {
    return head_w[(static_cast<std::size_t>(head) * kActions + action) * shape.hidden + unit];
  }
  double& head_bias(int head, int action) {
    return head_b[static_cast<std::size_t>(head) * kActions + action];
  }

  /// The four parameter blocks, trunk first.
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;
  std::size_t size() const { return trunk_w.size() + trunk_b.size() + head_w.size() + head_b.size(); }

  friend bool operator==(const NetParams&, const NetParams&) = default;
};

/// Q-values laid out batch x heads x kActions.
class QValues {
 public:
  QValues(int batch, int heads) : batch_(batch), heads_(heads), values_(static_cast<std::size_t>(batch) * heads * kActions) {}

  double& at(int row, int head, int action) { return values_[index(row, head, action)]; }
  double at(int row, int head, int action) const { return values_[index(row, head, action)]; }
  std::span<const double, kActions> head_row(int row, int head) const {
    return std::span<const double, kActions>(values_.data() + index(row, head, 0), kActions);
  }

  int batch() const { return batch_; }
  int heads() const { return heads_; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t index(int row, int head, int action) const {
    return (static_cast<std::size_t>(row) * heads_ + head) * kActions + action;
  }

  int batch_;
  int heads_;
  std::vector<double> values_;
};

/// Trunk pre-activations and ReLU outputs kept for the backward pass.
struct TrunkCache {
  std::vector<double> pre;     // batch x hidden
  std::vector<double> hidden;  // batch x hidden
};

/// Applies the trunk once per state and every head to the shared trunk
/// output. Throws std::invalid_argument on an input width mismatch.
QValues forward(const NetParams& params, std::span<const std::vector<double>> states,
                TrunkCache* cache = nullptr);

/// Online parameters plus a lagged target copy.
class MultiHeadNet {
 public:
  explicit MultiHeadNet(const NetShape& shape);

  /// Trunk and heads drawn uniform in +-1/sqrt(fan_in), head by head from
  /// the same stream; biases start at zero. The target starts synced.
  static MultiHeadNet initialise(const NetShape& shape, Rng& rng);

  QValues forward(std::span<const std::vector<double>> states) const;
  QValues forward_target(std::span<const std::vector<double>> states) const;

  void sync_target() { target_ = online_; }

  const NetShape& shape() const { return online_.shape; }
  int heads() const { return online_.shape.heads; }
  NetParams& online() { return online_; }
  const NetParams& online() const { return online_; }
  NetParams& target() { return target_; }
  const NetParams& target() const { return target_; }

 private:
  NetParams online_;
  NetParams target_;
};

/// Gradient of a loss with respect to the online parameters.
struct Gradients {
  NetParams values;
  /// Factor already applied to the trunk blocks (1/K for K heads).
  double trunk_scale = 1.0;
};

/// Plain SGD, online parameters only. Throws std::runtime_error on a
/// non-finite gradient and std::logic_error if the trunk gradient was not
/// normalised by the head count.
void grad_step(MultiHeadNet& net, const Gradients& grad, double learning_rate);

}  // namespace qshare::approx
