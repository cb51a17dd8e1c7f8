#include "soda/demos.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace soda {

namespace {

void validate_trajectory(const Trajectory& t, const std::string& where) {
  if (!t.success) throw std::invalid_argument(where + ": unsuccessful trajectory");
  if (t.actions.empty()) throw std::invalid_argument(where + ": empty trajectory");
  if (t.states.size() != t.actions.size() + 1)
    throw std::invalid_argument(where + ": states/actions length mismatch");
  const std::size_t dim = t.states.front().size();
  if (dim == 0) throw std::invalid_argument(where + ": empty state vector");
  for (const auto& s : t.states)
    if (s.size() != dim)
      throw std::invalid_argument(where + ": state dimensionality mismatch");
}

}  // namespace

DemoSet make_demo_set(std::vector<Trajectory> trajectories) {
  if (trajectories.empty()) throw std::invalid_argument("demo set: no trajectories");
  const std::string env_id = trajectories.front().env_id;
  const std::size_t dim = trajectories.front().states.front().size();
  int idx = 0;
  for (const auto& t : trajectories) {
    validate_trajectory(t, "trajectory " + std::to_string(idx));
    if (t.env_id != env_id)
      throw std::invalid_argument("demo set: mixed env_id values");
    if (t.states.front().size() != dim)
      throw std::invalid_argument("demo set: state dimensionality mismatch");
    ++idx;
  }
  DemoSet out;
  out.trajectories = std::move(trajectories);
  out.env_id = env_id;
  return out;
}

std::vector<double> compute_returns(const Trajectory& traj, double gamma) {
  if (!traj.success)
    throw std::domain_error("compute_returns: trajectory did not reach the goal");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("compute_returns: gamma out of (0,1]");
  const int T = traj.length();
  std::vector<double> g(T);
  // Sparse terminal reward: the return from step t is gamma^(T-t).
  double acc = 1.0;
  for (int t = T - 1; t >= 0; --t) {
    acc *= gamma;
    g[t] = acc;
  }
  return g;
}

ValueEstimateTable estimate_values(const DemoSet& demos, double gamma) {
  if (demos.trajectories.empty()) throw std::invalid_argument("estimate_values: empty demo set");
  ValueEstimateTable table;
  for (const auto& traj : demos.trajectories) {
    const std::vector<double> g = compute_returns(traj, gamma);
    for (int t = 0; t < traj.length(); ++t) {
      auto [it, inserted] = table.values.try_emplace(traj.states[t], g[t]);
      if (!inserted && g[t] > it->second) it->second = g[t];
    }
  }
  return table;
}

void warm_start_q(QTable& q, const DemoSet& demos, double gamma) {
  for (double v : q.values)
    if (v != 0.0) throw std::invalid_argument("warm_start_q: table is not zero-initialized");
  const ValueEstimateTable table = estimate_values(demos, gamma);
  for (const auto& traj : demos.trajectories) {
    for (int t = 0; t < traj.length(); ++t) {
      const auto& s = traj.states[t];
      if (s.size() != 1)
        throw std::invalid_argument("warm_start_q: expected tabular single-index states");
      double cell_f = s[0];
      int cell = static_cast<int>(cell_f);
      if (cell_f != cell || cell < 0 || cell >= q.n_states)
        throw std::out_of_range("warm_start_q: demo state out of range");
      int a = traj.actions[t];
      if (a < 0 || a >= q.n_actions)
        throw std::out_of_range("warm_start_q: demo action out of range");
      double v = table.at(s);
      if (v > q.at(cell, a)) q.at(cell, a) = v;
    }
  }
}

void save_demos(const DemoSet& demos, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& traj : demos.trajectories) {
    nlohmann::json j;
    j["env_id"] = traj.env_id;
    j["states"] = traj.states;
    j["actions"] = traj.actions;
    j["success"] = traj.success;
    out << j.dump() << "\n";
  }
}

DemoSet load_demos(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open demo file: " + path);
  std::vector<Trajectory> trajectories;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(where + ": malformed record: " + e.what());
    }
    Trajectory t;
    try {
      t.env_id = j.at("env_id").get<std::string>();
      t.states = j.at("states").get<std::vector<std::vector<double>>>();
      t.actions = j.at("actions").get<std::vector<int>>();
      t.success = j.at("success").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(where + ": malformed record: " + e.what());
    }
    try {
      validate_trajectory(t, "record");
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    trajectories.push_back(std::move(t));
  }
  if (trajectories.empty()) throw std::runtime_error(path + ": no trajectories");
  try {
    return make_demo_set(std::move(trajectories));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace soda
