#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soda/grid_env.hpp"
#include "soda/qtable.hpp"
#include "soda/rng.hpp"

namespace soda {

// Closed-form action probabilities of a policy over a discrete state space,
// indexed [state][action].
struct DiscretePolicy {
  std::vector<std::vector<double>> probs;

  int n_states() const { return static_cast<int>(probs.size()); }
  int sample(int s, Rng& rng) const;
};

DiscretePolicy epsilon_greedy_policy(const QTable& q, double epsilon);
DiscretePolicy uniform_policy(int n_states, int n_actions);

// Per-state sets of optimal actions. Ties are kept: the regret indicator is
// zero for any tied-optimal action. Rows of an oracle table that were never
// updated (terminal states) are all-zero, so their set spans every action
// and the state contributes zero regret.
struct OptimalActionMap {
  std::vector<std::vector<int>> optimal;

  int n_states() const { return static_cast<int>(optimal.size()); }
  bool is_optimal(int s, int a) const;
};

OptimalActionMap optimal_actions_from(const QTable& oracle);

struct StateDistribution {
  std::vector<double> mass;
};

// Throws unless masses are nonnegative and sum to 1 within 1e-9.
void validate_distribution(const StateDistribution& d);

// Mean over states of the probability of taking a non-optimal action,
// computed exactly from the policy's closed-form probabilities.
double regret_uniform(const DiscretePolicy& policy, const OptimalActionMap& optmap);

// Same quantity weighted by a state distribution d; with uniform d this
// reduces to regret_uniform exactly.
double regret_expected(const DiscretePolicy& policy, const OptimalActionMap& optmap,
                       const StateDistribution& d);

// (|A|-1)/|A|: regret of a uniform policy when each state has one optimal action.
double closed_form_case1(int n_actions);

// (1/|S|) * (|S_demo| (eps - eps/|A|) + (|S|-|S_demo|) (|A|-1)/|A|), the
// partially-initialized bound with a single 1/|S| normalization.
double closed_form_case2(int n_states, int n_demo_states, double epsilon,
                         int n_actions);

// Monte-Carlo visitation frequencies of a policy: every rollout counts its
// initial state and each state entered (terminal states on entry), truncated
// at max_steps, normalized over all visits. One RNG stream per rollout.
StateDistribution estimate_onpolicy_distribution(const GridSpec& spec,
                                                 const DiscretePolicy& policy,
                                                 int n_rollouts, int max_steps,
                                                 std::uint64_t seed);

// Exact visitation frequencies of the same truncated rollout process,
// computed by iterating the policy's transition operator. Serves as the
// oracle for the Monte-Carlo estimator.
StateDistribution exact_onpolicy_distribution(const GridSpec& spec,
                                              const DiscretePolicy& policy,
                                              int max_steps);

double total_variation(const StateDistribution& a, const StateDistribution& b);

struct RegretReport {
  std::string policy_id;
  double regret_uniform = 0.0;
  double regret_onpolicy = 0.0;
  int n_rollouts = 0;
  double epsilon = 0.0;
};

// Builds the epsilon-greedy policy from `q`, the optimal map from the oracle
// table, estimates the on-policy distribution, and reports both regrets.
RegretReport report(const GridSpec& spec, const QTable& q, const QTable& oracle,
                    double epsilon, int n_rollouts, std::uint64_t seed,
                    std::string policy_id = "");

}  // namespace soda
