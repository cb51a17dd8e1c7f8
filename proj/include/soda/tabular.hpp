#pragma once

#include <cstdint>
#include <vector>

#include "soda/demos.hpp"
#include "soda/grid_env.hpp"
#include "soda/qtable.hpp"
#include "soda/rng.hpp"

namespace soda {

struct EpsilonGreedy {
  double epsilon = 0.1;
};

// Argmax action set under exact tie comparison. Tables reach exact ties
// through zero initialization and converged deterministic backups, and the
// uniform-over-ties policy depends on them being preserved.
std::vector<int> greedy_actions(const QTable& q, int s);

// Closed-form action probabilities of the epsilon-greedy policy:
// (1-eps)/|argmax| for argmax actions plus eps/|A| everywhere. With an
// all-equal row this is exactly uniform.
std::vector<double> action_probabilities(const QTable& q, int s, double epsilon);

int select_action(const QTable& q, int s, EpsilonGreedy policy, Rng& rng);

// One TD backup; the bootstrap term is dropped on terminal transitions.
void q_update(QTable& q, int s, int a, double r, int s_next, bool terminal,
              double alpha, double gamma);

struct TrainConfig {
  int episodes = 10000;
  int max_steps = 100;
  double alpha = 0.1;
  double gamma = 0.99;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
};

struct EpisodeRecord {
  int episode = 0;
  double undiscounted_return = 0.0;
  int steps = 0;
  bool success = false;
};
using LearningCurve = std::vector<EpisodeRecord>;

struct TrainResult {
  QTable q;
  LearningCurve curve;
};

// Episodic epsilon-greedy Q-learning from the environment start state.
// Passing demos warm-starts the table via warm_start_q before the first
// episode; demos must come from the same map.
TrainResult train(const GridSpec& spec, const TrainConfig& config,
                  const DemoSet* warm_demos = nullptr);

struct OracleConfig {
  int episodes = 100000;
  int max_steps = 100;
  double gamma = 0.99;
  std::uint64_t seed = 1;
};

// Converged reference table used as the optimal-action oracle. Trains with
// uniform-random behavior from exploring starts and alpha = 1, which on a
// deterministic grid drives every visited entry to its exact fixed point.
// Throws if the resulting greedy policy does not reach the goal from start.
QTable train_oracle(const GridSpec& spec, const OracleConfig& config = {});

// Deterministic greedy rollout from the start state (first-index tie break).
Trajectory greedy_rollout(const GridSpec& spec, const QTable& q);

// Learning-curve summaries; both return curve.size() + 1 when the event
// never happens, so comparisons treat censored runs as slowest.
int episodes_to_first_success(const LearningCurve& curve);
int episodes_to_rolling_success(const LearningCurve& curve, int window = 100,
                                double threshold = 0.9);

// Rolling mean success over a trailing window, for reporting.
std::vector<double> rolling_success(const LearningCurve& curve, int window = 100);

}  // namespace soda
