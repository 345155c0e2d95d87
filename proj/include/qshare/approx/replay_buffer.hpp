#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qshare/rng.hpp"

namespace qshare::approx {

struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
  /// Per-head training mask; empty means every head trains on this sample.
  std::vector<std::uint8_t> mask;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Fixed-capacity FIFO experience store.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  /// Appends t, evicting the oldest transition once full.
  void push(Transition t);

  /// Uniform draws with replacement. Throws std::logic_error when empty.
  std::vector<Transition> sample_minibatch(std::size_t batch_size, Rng& rng) const;

  std::size_t size() const { return storage_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return storage_.empty(); }

  /// i-th oldest transition.
  const Transition& operator[](std::size_t i) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> storage_;
  std::size_t oldest_ = 0;
};

}  // namespace qshare::approx
