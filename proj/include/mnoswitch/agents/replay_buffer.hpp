#pragma once

#include <cstddef>
#include <vector>

#include "mnoswitch/env.hpp"
#include "mnoswitch/error.hpp"
#include "mnoswitch/random.hpp"

namespace mnoswitch::agents {

// Fixed-capacity FIFO of transitions; inserting when full evicts the oldest.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ValidationError("replay_capacity", "must be >= 1");
    storage_.reserve(capacity);
  }

  void push(const Transition& tr) {
    if (storage_.size() < capacity_) {
      storage_.push_back(tr);
    } else {
      storage_[head_] = tr;
      head_ = (head_ + 1) % capacity_;
    }
    ++inserted_;
  }

  std::size_t size() const noexcept { return storage_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t total_inserted() const noexcept { return inserted_; }

  // i-th oldest stored transition.
  const Transition& at(std::size_t i) const {
    if (i >= storage_.size()) throw ValidationError("replay", "index out of range");
    return storage_[(head_ + i) % storage_.size()];
  }

  // `count` independent uniform draws (with replacement).
  std::vector<Transition> sample(std::size_t count, Rng& rng) const {
    if (storage_.empty()) throw InsufficientData("replay buffer is empty");
    std::vector<Transition> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(storage_[uniform_index(rng, storage_.size())]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // oldest slot once the buffer is full
  std::size_t inserted_ = 0;
  std::vector<Transition> storage_;
};

}  // namespace mnoswitch::agents
