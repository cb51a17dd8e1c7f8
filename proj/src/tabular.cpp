#include "soda/tabular.hpp"

#include <algorithm>
#include <stdexcept>

namespace soda {

std::vector<int> greedy_actions(const QTable& q, int s) {
  double best = q.at(s, 0);
  for (int a = 1; a < q.n_actions; ++a) best = std::max(best, q.at(s, a));
  std::vector<int> out;
  for (int a = 0; a < q.n_actions; ++a)
    if (q.at(s, a) == best) out.push_back(a);
  return out;
}

std::vector<double> action_probabilities(const QTable& q, int s, double epsilon) {
  const std::vector<int> best = greedy_actions(q, s);
  std::vector<double> p(q.n_actions, epsilon / q.n_actions);
  for (int a : best) p[a] += (1.0 - epsilon) / best.size();
  return p;
}

int select_action(const QTable& q, int s, EpsilonGreedy policy, Rng& rng) {
  if (rng.uniform() < policy.epsilon) return rng.uniform_int(q.n_actions);
  const std::vector<int> best = greedy_actions(q, s);
  return best[rng.uniform_int(static_cast<int>(best.size()))];
}

void q_update(QTable& q, int s, int a, double r, int s_next, bool terminal,
              double alpha, double gamma) {
  double bootstrap = 0.0;
  if (!terminal) {
    bootstrap = q.at(s_next, 0);
    for (int an = 1; an < q.n_actions; ++an)
      bootstrap = std::max(bootstrap, q.at(s_next, an));
  }
  double target = r + gamma * bootstrap;
  q.at(s, a) += alpha * (target - q.at(s, a));
}

TrainResult train(const GridSpec& spec, const TrainConfig& config,
                  const DemoSet* warm_demos) {
  QTable q(spec.n_cells(), kGridActionCount);
  if (warm_demos) {
    if (warm_demos->env_id != spec.map_id)
      throw std::invalid_argument("train: demos recorded on '" + warm_demos->env_id +
                                  "' but training on '" + spec.map_id + "'");
    warm_start_q(q, *warm_demos, config.gamma);
  }

  Rng rng(config.seed, 0);
  EpsilonGreedy policy{config.epsilon};
  LearningCurve curve;
  curve.reserve(config.episodes);

  for (int ep = 0; ep < config.episodes; ++ep) {
    GridState s{spec.start};
    EpisodeRecord rec;
    rec.episode = ep;
    for (int step = 0; step < config.max_steps; ++step) {
      int a = select_action(q, s.cell, policy, rng);
      Step<GridState> out = grid_step(spec, s, static_cast<GridAction>(a), step);
      q_update(q, s.cell, a, out.reward, out.next.cell, out.terminal,
               config.alpha, config.gamma);
      rec.undiscounted_return += out.reward;
      rec.steps = step + 1;
      s = out.next;
      if (out.terminal) {
        rec.success = out.reward > 0.0;
        break;
      }
    }
    curve.push_back(rec);
  }
  return TrainResult{std::move(q), std::move(curve)};
}

QTable train_oracle(const GridSpec& spec, const OracleConfig& config) {
  QTable q(spec.n_cells(), kGridActionCount);

  std::vector<int> starts;
  for (int c = 0; c < spec.n_cells(); ++c)
    if (!spec.is_terminal_cell(c)) starts.push_back(c);

  Rng rng(config.seed, 1);
  for (int ep = 0; ep < config.episodes; ++ep) {
    GridState s{starts[rng.uniform_int(static_cast<int>(starts.size()))]};
    for (int step = 0; step < config.max_steps; ++step) {
      int a = rng.uniform_int(kGridActionCount);
      Step<GridState> out = grid_step(spec, s, static_cast<GridAction>(a), step);
      q_update(q, s.cell, a, out.reward, out.next.cell, out.terminal,
               /*alpha=*/1.0, config.gamma);
      s = out.next;
      if (out.terminal) break;
    }
  }

  Trajectory check = greedy_rollout(spec, q);
  if (!check.success)
    throw std::runtime_error(
        "train_oracle: greedy policy does not solve the map; "
        "unsolvable layout or insufficient budget");
  return q;
}

Trajectory greedy_rollout(const GridSpec& spec, const QTable& q) {
  Trajectory traj;
  traj.env_id = spec.map_id;
  GridState s{spec.start};
  traj.states.push_back({static_cast<double>(s.cell)});
  for (int step = 0; step < spec.max_steps; ++step) {
    int a = greedy_actions(q, s.cell)[0];
    Step<GridState> out = grid_step(spec, s, static_cast<GridAction>(a), step);
    traj.actions.push_back(a);
    traj.states.push_back({static_cast<double>(out.next.cell)});
    s = out.next;
    if (out.terminal) {
      traj.success = out.reward > 0.0;
      break;
    }
    if (out.truncated) break;
  }
  return traj;
}

int episodes_to_first_success(const LearningCurve& curve) {
  for (const auto& rec : curve)
    if (rec.success) return rec.episode + 1;
  return static_cast<int>(curve.size()) + 1;
}

int episodes_to_rolling_success(const LearningCurve& curve, int window,
                                double threshold) {
  int successes = 0;
  for (int i = 0; i < static_cast<int>(curve.size()); ++i) {
    successes += curve[i].success ? 1 : 0;
    if (i >= window) successes -= curve[i - window].success ? 1 : 0;
    int span = std::min(i + 1, window);
    if (span == window && successes >= threshold * window) return i + 1;
  }
  return static_cast<int>(curve.size()) + 1;
}

std::vector<double> rolling_success(const LearningCurve& curve, int window) {
  std::vector<double> out(curve.size(), 0.0);
  int successes = 0;
  for (int i = 0; i < static_cast<int>(curve.size()); ++i) {
    successes += curve[i].success ? 1 : 0;
    if (i >= window) successes -= curve[i - window].success ? 1 : 0;
    out[i] = static_cast<double>(successes) / std::min(i + 1, window);
  }
  return out;
}

}  // namespace soda
