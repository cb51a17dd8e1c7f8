#pragma once

#include <string>
#include <vector>

namespace soda {

// Dense |S| x |A| action-value table, zero-initialized.
struct QTable {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> values;

  QTable() = default;
  QTable(int states, int actions)
      : n_states(states), n_actions(actions),
        values(static_cast<std::size_t>(states) * actions, 0.0) {}

  double& at(int s, int a) { return values[static_cast<std::size_t>(s) * n_actions + a]; }
  double at(int s, int a) const { return values[static_cast<std::size_t>(s) * n_actions + a]; }
};

// CSV snapshot with a one-line header (n_states, n_actions, env_id).
// Values are written with round-trip precision.
void save_qtable(const QTable& q, const std::string& env_id, const std::string& path);
struct QTableSnapshot {
  QTable table;
  std::string env_id;
};
QTableSnapshot load_qtable(const std::string& path);

}  // namespace soda
