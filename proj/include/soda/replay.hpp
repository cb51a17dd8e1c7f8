#pragma once

#include <stdexcept>
#include <vector>

#include "soda/demos.hpp"
#include "soda/rng.hpp"

namespace soda {

struct Transition {
  std::vector<double> s;
  int a = 0;
  double r = 0.0;
  std::vector<double> s_next;
  bool terminal = false;
};

// FIFO ring buffer for online transitions.
class OnlineReplay {
 public:
  explicit OnlineReplay(int capacity) : capacity_(capacity) {
    if (capacity <= 0) throw std::invalid_argument("replay: non-positive capacity");
    data_.reserve(capacity);
  }

  void add(Transition t) {
    if (static_cast<int>(data_.size()) < capacity_) {
      data_.push_back(std::move(t));
    } else {
      data_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
    ++inserted_;
  }

  int size() const { return static_cast<int>(data_.size()); }
  long inserted() const { return inserted_; }
  const Transition& at(int i) const { return data_[i]; }
  const Transition& sample(Rng& rng) const { return data_[rng.uniform_int(size())]; }

 private:
  int capacity_;
  std::vector<Transition> data_;
  int next_ = 0;
  long inserted_ = 0;
};

// Demonstration state-action pair with its precomputed Monte-Carlo return.
struct DemoTarget {
  std::vector<double> s;
  int a = 0;
  double g = 0.0;
};

// Immutable demonstration buffer, filled once before training.
class DemoBuffer {
 public:
  DemoBuffer() = default;
  explicit DemoBuffer(std::vector<DemoTarget> targets) : data_(std::move(targets)) {}

  int size() const { return static_cast<int>(data_.size()); }
  const DemoTarget& at(int i) const { return data_[i]; }
  const DemoTarget& sample(Rng& rng) const { return data_[rng.uniform_int(size())]; }

 private:
  std::vector<DemoTarget> data_;
};

// (s, a, G_t) tuples from every demonstrated pair.
DemoBuffer build_demo_buffer(const DemoSet& demos, double gamma);

// The same demonstrations as raw sparse-reward transitions (reward 1 only on
// the final, terminal step), for the mixed-batch baseline.
std::vector<Transition> demo_transitions(const DemoSet& demos);

}  // namespace soda
