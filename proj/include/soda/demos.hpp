#pragma once

#include <map>
#include <string>
#include <vector>

#include "soda/qtable.hpp"

namespace soda {

// A successful episode: states[t] is the state in which actions[t] was taken,
// states[T] is the terminal success state. Tabular states are single-element
// vectors holding the cell index; continuous states are full feature vectors.
struct Trajectory {
  std::vector<std::vector<double>> states;
  std::vector<int> actions;
  bool success = false;
  std::string env_id;

  int length() const { return static_cast<int>(actions.size()); }
  const std::vector<double>& final_state() const { return states.back(); }
};

struct DemoSet {
  std::vector<Trajectory> trajectories;
  std::string env_id;

  int size() const { return static_cast<int>(trajectories.size()); }
};

// Validates and assembles a demo set: non-empty, success-only, consistent
// env_id and state dimensionality, states.size() == actions.size() + 1.
DemoSet make_demo_set(std::vector<Trajectory> trajectories);

// Discounted returns [gamma^(T-t)] for t = 0..T-1; one entry per (state,
// action) pair. Only defined for successful trajectories.
std::vector<double> compute_returns(const Trajectory& traj, double gamma);

// State-value estimates from demonstration returns. Repeated visits keep the
// maximum return seen, the tightest lower bound available on the optimal
// value.
struct ValueEstimateTable {
  std::map<std::vector<double>, double> values;

  bool contains(const std::vector<double>& s) const { return values.count(s) > 0; }
  double at(const std::vector<double>& s) const { return values.at(s); }
};

ValueEstimateTable estimate_values(const DemoSet& demos, double gamma);

// Writes V(s_t) into Q(s_t, a_t) for every demonstrated pair; q must be
// zero-initialized and the demos must carry tabular (single cell index)
// states within range.
void warm_start_q(QTable& q, const DemoSet& demos, double gamma);

// JSONL persistence, one trajectory per line:
// {"env_id": str, "states": [[...], ...], "actions": [int, ...], "success": bool}
void save_demos(const DemoSet& demos, const std::string& path);
DemoSet load_demos(const std::string& path);

}  // namespace soda
