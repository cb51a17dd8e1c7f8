#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soda/rng.hpp"

namespace soda {

// Evenly spaced value bins over [v_min, v_max]; scalars are encoded as linear
// mass on the two bracketing bins, so the readout of a projection reproduces
// the (clamped) scalar exactly.
struct CategoricalHead {
  int n_bins = 51;
  double v_min = 0.0;
  double v_max = 1.0;

  double center(int i) const {
    return v_min + (v_max - v_min) * i / (n_bins - 1);
  }
  std::vector<double> project(double v) const;
  double readout(const std::vector<double>& probs) const;
};

// Fully connected net with tanh hidden layers and a linear output layer of
// n_actions * n_bins logits. Parameters live in one flat vector:
// [W0 b0 W1 b1 ...], W row-major (in x out).
struct NetShape {
  int in_dim = 0;
  std::vector<int> hidden{64, 64};
  int n_actions = 0;
  int n_bins = 51;

  std::vector<int> layer_dims() const;  // [in, hidden..., n_actions*n_bins]
  int n_params() const;
};

struct ValueNet {
  NetShape shape;
  std::vector<double> params;

  static ValueNet zeros(const NetShape& shape);
  static ValueNet random_init(const NetShape& shape, Rng& rng);
};

// Logits for one state, laid out action-major: logits[a*n_bins + b].
std::vector<double> forward(const ValueNet& net, const std::vector<double>& x);

// Expected value under the softmax bin distribution of one action; always in
// [v_min, v_max].
double q_value(const ValueNet& net, const CategoricalHead& head,
               const std::vector<double>& x, int action);

// Expected values for all actions at once.
std::vector<double> q_values(const ValueNet& net, const CategoricalHead& head,
                             const std::vector<double>& x);

int greedy_action(const ValueNet& net, const CategoricalHead& head,
                  const std::vector<double>& x);

// One training batch: per sample a state, the taken action, and a target
// probability vector over bins for that action.
struct CategoricalBatch {
  std::vector<std::vector<double>> states;
  std::vector<int> actions;
  std::vector<std::vector<double>> targets;

  int size() const { return static_cast<int>(states.size()); }
};

// Mean cross-entropy between targets and the predicted bin distributions of
// the taken actions, plus exact gradients with respect to every parameter.
// grads is resized and overwritten. Throws on a non-finite loss.
double cross_entropy_loss_and_grads(const ValueNet& net, const CategoricalBatch& batch,
                                    std::vector<double>& grads);

// Loss only (used by the finite-difference oracle in tests).
double cross_entropy_loss(const ValueNet& net, const CategoricalBatch& batch);

struct Adam {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  std::vector<double> m, v;
  long t = 0;

  void step(std::vector<double>& params, const std::vector<double>& grads);
};

// Versioned binary checkpoint: shape, flat parameters, and a config hash.
void save_checkpoint(const ValueNet& net, std::uint64_t config_hash,
                     const std::string& path);
struct Checkpoint {
  ValueNet net;
  std::uint64_t config_hash = 0;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace soda
