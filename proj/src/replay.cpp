#include "soda/replay.hpp"

namespace soda {

DemoBuffer build_demo_buffer(const DemoSet& demos, double gamma) {
  std::vector<DemoTarget> targets;
  for (const auto& traj : demos.trajectories) {
    const std::vector<double> g = compute_returns(traj, gamma);
    for (int t = 0; t < traj.length(); ++t)
      targets.push_back({traj.states[t], traj.actions[t], g[t]});
  }
  return DemoBuffer(std::move(targets));
}

std::vector<Transition> demo_transitions(const DemoSet& demos) {
  std::vector<Transition> out;
  for (const auto& traj : demos.trajectories) {
    const int T = traj.length();
    for (int t = 0; t < T; ++t) {
      Transition tr;
      tr.s = traj.states[t];
      tr.a = traj.actions[t];
      tr.s_next = traj.states[t + 1];
      tr.terminal = t == T - 1;
      tr.r = tr.terminal ? 1.0 : 0.0;
      out.push_back(std::move(tr));
    }
  }
  return out;
}

}  // namespace soda
