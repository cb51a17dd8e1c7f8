#include "soda/regret.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "soda/tabular.hpp"

namespace soda {

int DiscretePolicy::sample(int s, Rng& rng) const {
  const auto& p = probs[s];
  double u = rng.uniform();
  double acc = 0.0;
  for (int a = 0; a < static_cast<int>(p.size()); ++a) {
    acc += p[a];
    if (u < acc) return a;
  }
  return static_cast<int>(p.size()) - 1;
}

DiscretePolicy epsilon_greedy_policy(const QTable& q, double epsilon) {
  DiscretePolicy pi;
  pi.probs.resize(q.n_states);
  for (int s = 0; s < q.n_states; ++s)
    pi.probs[s] = action_probabilities(q, s, epsilon);
  return pi;
}

DiscretePolicy uniform_policy(int n_states, int n_actions) {
  DiscretePolicy pi;
  pi.probs.assign(n_states, std::vector<double>(n_actions, 1.0 / n_actions));
  return pi;
}

bool OptimalActionMap::is_optimal(int s, int a) const {
  const auto& set = optimal[s];
  return std::find(set.begin(), set.end(), a) != set.end();
}

OptimalActionMap optimal_actions_from(const QTable& oracle) {
  OptimalActionMap map;
  map.optimal.resize(oracle.n_states);
  for (int s = 0; s < oracle.n_states; ++s) map.optimal[s] = greedy_actions(oracle, s);
  return map;
}

void validate_distribution(const StateDistribution& d) {
  double sum = 0.0;
  for (double m : d.mass) {
    if (m < 0.0) throw std::invalid_argument("state distribution: negative mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("state distribution: masses do not sum to 1");
}

namespace {

double per_state_regret(const std::vector<double>& probs,
                        const std::vector<int>& optimal) {
  if (optimal.empty())
    throw std::invalid_argument("regret: state with empty optimal action set");
  double optimal_mass = 0.0;
  for (int a : optimal) optimal_mass += probs[a];
  return 1.0 - optimal_mass;
}

}  // namespace

double regret_uniform(const DiscretePolicy& policy, const OptimalActionMap& optmap) {
  if (policy.n_states() != optmap.n_states())
    throw std::invalid_argument("regret: policy/optimal-map state count mismatch");
  double total = 0.0;
  for (int s = 0; s < policy.n_states(); ++s)
    total += per_state_regret(policy.probs[s], optmap.optimal[s]);
  return total / policy.n_states();
}

double regret_expected(const DiscretePolicy& policy, const OptimalActionMap& optmap,
                       const StateDistribution& d) {
  if (policy.n_states() != optmap.n_states() ||
      policy.n_states() != static_cast<int>(d.mass.size()))
    throw std::invalid_argument("regret: input size mismatch");
  validate_distribution(d);
  double total = 0.0;
  for (int s = 0; s < policy.n_states(); ++s)
    total += d.mass[s] * per_state_regret(policy.probs[s], optmap.optimal[s]);
  return total;
}

double closed_form_case1(int n_actions) {
  if (n_actions < 1) throw std::invalid_argument("closed_form_case1: n_actions < 1");
  return static_cast<double>(n_actions - 1) / n_actions;
}

double closed_form_case2(int n_states, int n_demo_states, double epsilon,
                         int n_actions) {
  if (n_demo_states < 0 || n_demo_states > n_states)
    throw std::invalid_argument("closed_form_case2: demo state count out of range");
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("closed_form_case2: epsilon out of [0,1]");
  double demo_term = n_demo_states * (epsilon - epsilon / n_actions);
  double nondemo_term = (n_states - n_demo_states) * closed_form_case1(n_actions);
  return (demo_term + nondemo_term) / n_states;
}

StateDistribution estimate_onpolicy_distribution(const GridSpec& spec,
                                                 const DiscretePolicy& policy,
                                                 int n_rollouts, int max_steps,
                                                 std::uint64_t seed) {
  if (n_rollouts < 1) throw std::invalid_argument("estimate_onpolicy_distribution: n_rollouts < 1");
  std::vector<double> counts(spec.n_cells(), 0.0);
  double total = 0.0;
  for (int k = 0; k < n_rollouts; ++k) {
    Rng rng(seed, static_cast<std::uint64_t>(k));
    GridState s{spec.start};
    counts[s.cell] += 1.0;
    total += 1.0;
    for (int step = 0; step < max_steps; ++step) {
      int a = policy.sample(s.cell, rng);
      Step<GridState> out = grid_step(spec, s, static_cast<GridAction>(a), step);
      counts[out.next.cell] += 1.0;
      total += 1.0;
      s = out.next;
      if (out.terminal) break;
    }
  }
  StateDistribution d;
  d.mass.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) d.mass[i] = counts[i] / total;
  return d;
}

StateDistribution exact_onpolicy_distribution(const GridSpec& spec,
                                              const DiscretePolicy& policy,
                                              int max_steps) {
  const int n = spec.n_cells();
  // `alive` carries the probability mass of rollouts that are still running;
  // mass entering a terminal cell is counted once and then removed.
  std::vector<double> alive(n, 0.0), next(n, 0.0), visits(n, 0.0);
  alive[spec.start] = 1.0;
  visits[spec.start] = 1.0;
  double total = 1.0;
  for (int step = 0; step < max_steps; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < n; ++s) {
      if (alive[s] <= 0.0) continue;
      for (int a = 0; a < static_cast<int>(policy.probs[s].size()); ++a) {
        double p = alive[s] * policy.probs[s][a];
        if (p <= 0.0) continue;
        Step<GridState> out = grid_step(spec, GridState{s}, static_cast<GridAction>(a), step);
        visits[out.next.cell] += p;
        total += p;
        if (!out.terminal) next[out.next.cell] += p;
      }
    }
    alive.swap(next);
  }
  StateDistribution d;
  d.mass.resize(n);
  for (int i = 0; i < n; ++i) d.mass[i] = visits[i] / total;
  return d;
}

double total_variation(const StateDistribution& a, const StateDistribution& b) {
  if (a.mass.size() != b.mass.size())
    throw std::invalid_argument("total_variation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.mass.size(); ++i) acc += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * acc;
}

RegretReport report(const GridSpec& spec, const QTable& q, const QTable& oracle,
                    double epsilon, int n_rollouts, std::uint64_t seed,
                    std::string policy_id) {
  if (q.n_states != spec.n_cells() || oracle.n_states != spec.n_cells())
    throw std::invalid_argument("report: table does not match the environment");
  const DiscretePolicy policy = epsilon_greedy_policy(q, epsilon);
  const OptimalActionMap optmap = optimal_actions_from(oracle);
  RegretReport rep;
  rep.policy_id = std::move(policy_id);
  rep.epsilon = epsilon;
  rep.n_rollouts = n_rollouts;
  rep.regret_uniform = regret_uniform(policy, optmap);
  StateDistribution d =
      estimate_onpolicy_distribution(spec, policy, n_rollouts, spec.max_steps, seed);
  rep.regret_onpolicy = regret_expected(policy, optmap, d);
  return rep;
}

}  // namespace soda
