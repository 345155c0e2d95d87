#include "qshare/approx/replay_buffer.hpp"

#include <stdexcept>

namespace qshare::approx {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
  storage_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
    return;
  }
  storage_[oldest_] = std::move(t);
  oldest_ = (oldest_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::sample_minibatch(std::size_t batch_size, Rng& rng) const {
  if (storage_.empty()) throw std::logic_error("cannot sample from an empty replay buffer");
  std::vector<Transition> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) batch.push_back(storage_[rng.uniform_index(storage_.size())]);
  return batch;
}

const Transition& ReplayBuffer::operator[](std::size_t i) const {
  if (i >= storage_.size()) throw std::out_of_range("replay buffer index out of range");
  return storage_[(oldest_ + i) % storage_.size()];
}

}  // namespace qshare::approx
