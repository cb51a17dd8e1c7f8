#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "soda/demos.hpp"
#include "soda/env_adapter.hpp"
#include "soda/replay.hpp"
#include "soda/value_net.hpp"

namespace soda {

// Training variants sharing one loop:
//   Soda  - dual buffers; per step one TD batch from online data plus one
//           Monte-Carlo-target batch from the immutable demo buffer.
//   Mixed - single batch mixing raw demo transitions with online ones, all
//           with TD targets (the 50/50 comparison baseline).
//   Cold  - online transitions only.
enum class ApproxMode { Soda, Mixed, Cold };

struct SodaConfig {
  double gamma = 0.99;
  double eps_start = 1.0;
  double eps_end = 0.05;
  int eps_decay_steps = 0;  // 0: first 20% of total_steps
  int batch_size = 64;      // per buffer
  double lr = 3e-4;
  int target_sync = 500;    // gradient steps between hard target copies
  int grad_steps_per_env_step = 1;
  int n_bins = 51;
  std::vector<int> hidden{64, 64};
  int buffer_capacity = 100000;
  int total_steps = 30000;
  int eval_period = 2000;
  int eval_episodes = 20;
  double mixed_demo_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct ApproxEpisodeRow {
  long step = 0;  // cumulative env steps at episode end
  int episode = 0;
  double undiscounted_return = 0.0;
  bool success = false;
  double eval_success = 0.0;  // latest greedy evaluation result
  double loss_online = 0.0;   // mean over updates since the previous row
  double loss_demo = 0.0;
};

struct EvalPoint {
  long step = 0;
  double success = 0.0;
};

struct ApproxCurve {
  std::vector<ApproxEpisodeRow> episodes;
  std::vector<EvalPoint> evals;
};

struct SodaResult {
  ApproxCurve curve;
  ValueNet net;
  CategoricalHead head;
};

struct LossPair {
  double online = 0.0;
  double demo = 0.0;
};

// TD target for one transition, clamped into the head's value range.
double td_target(const ValueNet& target_net, const CategoricalHead& head,
                 const Transition& t, double gamma);

// Two cross-entropy gradient steps: the online batch against projected TD
// targets from the target network, then the demo batch against projected
// Monte-Carlo returns.
LossPair soda_update(ValueNet& net, const ValueNet& target_net,
                     const CategoricalHead& head,
                     const std::vector<const Transition*>& online_batch,
                     const std::vector<const DemoTarget*>& demo_batch,
                     double gamma, Adam& opt);

// Mean greedy success rate over `episodes` rollouts.
double evaluate_greedy(RolloutEnv& env, const ValueNet& net,
                       const CategoricalHead& head, int episodes, Rng& rng);

SodaResult train_approx(RolloutEnv& env, const DemoSet* demos,
                        const SodaConfig& config, ApproxMode mode);

// Dual-buffer agent; requires a non-empty demo set.
SodaResult train_soda(RolloutEnv& env, const DemoSet& demos, const SodaConfig& config);

// 50% offline / 50% online batching with raw sparse demo rewards.
SodaResult train_mixed_baseline(RolloutEnv& env, const DemoSet& demos,
                                const SodaConfig& config);

// Sparse online learning with no demonstrations.
SodaResult train_cold_baseline(RolloutEnv& env, const SodaConfig& config);

// Area under the eval-success curve (mean of eval points), used to compare
// agents trained with identical eval schedules.
double eval_auc(const ApproxCurve& curve);

// First step at which eval success reached `threshold`; total budget + 1 if never.
long steps_to_eval_success(const ApproxCurve& curve, double threshold, long budget);

}  // namespace soda
