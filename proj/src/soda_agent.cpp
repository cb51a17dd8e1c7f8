#include "soda/soda_agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace soda {

namespace {

// Independent RNG stream ids derived from the run seed.
enum Stream : std::uint64_t {
  kNetInit = 10,
  kEnvReset = 11,
  kExplore = 12,
  kOnlineSample = 13,
  kDemoSample = 14,
  kEvalBase = 1000,  // + eval round index
};

double epsilon_at(const SodaConfig& cfg, long step) {
  long decay = cfg.eps_decay_steps > 0 ? cfg.eps_decay_steps : cfg.total_steps / 5;
  if (decay <= 0 || step >= decay) return cfg.eps_end;
  return cfg.eps_start + (cfg.eps_end - cfg.eps_start) * (static_cast<double>(step) / decay);
}

CategoricalBatch make_td_batch(const ValueNet& target_net, const CategoricalHead& head,
                               const std::vector<const Transition*>& batch, double gamma) {
  CategoricalBatch out;
  out.states.reserve(batch.size());
  out.actions.reserve(batch.size());
  out.targets.reserve(batch.size());
  for (const Transition* t : batch) {
    double y = td_target(target_net, head, *t, gamma);
    out.states.push_back(t->s);
    out.actions.push_back(t->a);
    out.targets.push_back(head.project(y));
  }
  return out;
}

CategoricalBatch make_return_batch(const CategoricalHead& head,
                                   const std::vector<const DemoTarget*>& batch) {
  CategoricalBatch out;
  out.states.reserve(batch.size());
  out.actions.reserve(batch.size());
  out.targets.reserve(batch.size());
  for (const DemoTarget* d : batch) {
    out.states.push_back(d->s);
    out.actions.push_back(d->a);
    out.targets.push_back(head.project(d->g));
  }
  return out;
}

}  // namespace

double td_target(const ValueNet& target_net, const CategoricalHead& head,
                 const Transition& t, double gamma) {
  double y = t.r;
  if (!t.terminal) {
    const std::vector<double> q = q_values(target_net, head, t.s_next);
    y += gamma * *std::max_element(q.begin(), q.end());
  }
  return std::clamp(y, head.v_min, head.v_max);
}

LossPair soda_update(ValueNet& net, const ValueNet& target_net,
                     const CategoricalHead& head,
                     const std::vector<const Transition*>& online_batch,
                     const std::vector<const DemoTarget*>& demo_batch,
                     double gamma, Adam& opt) {
  LossPair losses;
  std::vector<double> grads;

  CategoricalBatch td = make_td_batch(target_net, head, online_batch, gamma);
  losses.online = cross_entropy_loss_and_grads(net, td, grads);
  opt.step(net.params, grads);

  CategoricalBatch mc = make_return_batch(head, demo_batch);
  losses.demo = cross_entropy_loss_and_grads(net, mc, grads);
  opt.step(net.params, grads);
  return losses;
}

double evaluate_greedy(RolloutEnv& env, const ValueNet& net,
                       const CategoricalHead& head, int episodes, Rng& rng) {
  int successes = 0;
  for (int ep = 0; ep < episodes; ++ep) {
    std::vector<double> obs = env.reset(rng);
    while (true) {
      int a = greedy_action(net, head, obs);
      Step<std::vector<double>> out = env.step(a);
      obs = out.next;
      if (out.terminal) {
        if (out.reward > 0.0) ++successes;
        break;
      }
      if (out.truncated) break;
    }
  }
  return static_cast<double>(successes) / episodes;
}

SodaResult train_approx(RolloutEnv& env, const DemoSet* demos,
                        const SodaConfig& config, ApproxMode mode) {
  if (mode == ApproxMode::Soda && (demos == nullptr || demos->size() == 0))
    throw std::invalid_argument("train_soda: demo set required");
  if (mode == ApproxMode::Mixed && config.mixed_demo_fraction > 0.0 &&
      (demos == nullptr || demos->size() == 0))
    throw std::invalid_argument("train_mixed_baseline: demo set required");
  if (demos != nullptr && demos->size() > 0 && demos->env_id != env.env_id())
    throw std::invalid_argument("train: demos recorded on '" + demos->env_id +
                                "' but environment is '" + env.env_id() + "'");

  NetShape shape;
  shape.in_dim = env.obs_dim();
  shape.hidden = config.hidden;
  shape.n_actions = env.n_actions();
  shape.n_bins = config.n_bins;
  CategoricalHead head{config.n_bins, 0.0, 1.0};

  Rng rng_init(config.seed, kNetInit);
  ValueNet net = ValueNet::random_init(shape, rng_init);
  ValueNet target_net = net;
  Adam opt;
  opt.lr = config.lr;

  DemoBuffer demo_buffer;
  std::vector<Transition> mixed_pool;
  if (mode == ApproxMode::Soda) demo_buffer = build_demo_buffer(*demos, config.gamma);
  if (mode == ApproxMode::Mixed && demos != nullptr && config.mixed_demo_fraction > 0.0)
    mixed_pool = demo_transitions(*demos);

  OnlineReplay online(config.buffer_capacity);
  Rng rng_env(config.seed, kEnvReset);
  Rng rng_explore(config.seed, kExplore);
  Rng rng_online(config.seed, kOnlineSample);
  Rng rng_demo(config.seed, kDemoSample);

  SodaResult result;
  result.head = head;

  std::unique_ptr<RolloutEnv> eval_env = env.clone();
  std::vector<double> obs = env.reset(rng_env);
  int episode = 0;
  double ep_return = 0.0;
  double latest_eval = 0.0;
  double loss_online_sum = 0.0, loss_demo_sum = 0.0;
  long loss_count = 0;
  long grad_steps = 0, since_sync = 0;
  int eval_round = 0;

  const int demo_per_batch =
      mode == ApproxMode::Mixed
          ? static_cast<int>(std::lround(config.batch_size * config.mixed_demo_fraction))
          : 0;

  for (long step = 1; step <= config.total_steps; ++step) {
    double eps = epsilon_at(config, step - 1);
    int a;
    if (rng_explore.uniform() < eps) {
      a = rng_explore.uniform_int(env.n_actions());
    } else {
      a = greedy_action(net, head, obs);
    }
    Step<std::vector<double>> out = env.step(a);
    online.add({obs, a, out.reward, out.next, out.terminal});
    ep_return += out.reward;

    bool ready = online.size() >= config.batch_size &&
                 (mode != ApproxMode::Soda || demo_buffer.size() > 0);
    if (ready) {
      for (int g = 0; g < config.grad_steps_per_env_step; ++g) {
        if (mode == ApproxMode::Soda) {
          std::vector<const Transition*> ob(config.batch_size);
          for (auto& p : ob) p = &online.sample(rng_online);
          std::vector<const DemoTarget*> db(config.batch_size);
          for (auto& p : db) p = &demo_buffer.sample(rng_demo);
          LossPair lp = soda_update(net, target_net, head, ob, db, config.gamma, opt);
          loss_online_sum += lp.online;
          loss_demo_sum += lp.demo;
          grad_steps += 2;
          since_sync += 2;
        } else {
          std::vector<const Transition*> ob;
          ob.reserve(config.batch_size);
          for (int i = 0; i < demo_per_batch && !mixed_pool.empty(); ++i)
            ob.push_back(&mixed_pool[rng_demo.uniform_int(static_cast<int>(mixed_pool.size()))]);
          while (static_cast<int>(ob.size()) < config.batch_size)
            ob.push_back(&online.sample(rng_online));
          CategoricalBatch td = make_td_batch(target_net, head, ob, config.gamma);
          std::vector<double> grads;
          double loss = cross_entropy_loss_and_grads(net, td, grads);
          opt.step(net.params, grads);
          loss_online_sum += loss;
          grad_steps += 1;
          since_sync += 1;
        }
        ++loss_count;
        if (since_sync >= config.target_sync) {
          target_net = net;
          since_sync = 0;
        }
      }
    }

    bool episode_over = out.terminal || out.truncated;
    if (episode_over) {
      ApproxEpisodeRow row;
      row.step = step;
      row.episode = episode;
      row.undiscounted_return = ep_return;
      row.success = out.terminal && out.reward > 0.0;
      row.eval_success = latest_eval;
      row.loss_online = loss_count > 0 ? loss_online_sum / loss_count : 0.0;
      row.loss_demo = loss_count > 0 ? loss_demo_sum / loss_count : 0.0;
      result.curve.episodes.push_back(row);
      ++episode;
      ep_return = 0.0;
      loss_online_sum = loss_demo_sum = 0.0;
      loss_count = 0;
      obs = env.reset(rng_env);
    } else {
      obs = out.next;
    }

    if (step % config.eval_period == 0 || step == config.total_steps) {
      Rng rng_eval(config.seed, kEvalBase + static_cast<std::uint64_t>(eval_round));
      ++eval_round;
      latest_eval = evaluate_greedy(*eval_env, net, head, config.eval_episodes, rng_eval);
      result.curve.evals.push_back({step, latest_eval});
    }
  }

  result.net = std::move(net);
  return result;
}

SodaResult train_soda(RolloutEnv& env, const DemoSet& demos, const SodaConfig& config) {
  return train_approx(env, &demos, config, ApproxMode::Soda);
}

SodaResult train_mixed_baseline(RolloutEnv& env, const DemoSet& demos,
                                const SodaConfig& config) {
  return train_approx(env, &demos, config, ApproxMode::Mixed);
}

SodaResult train_cold_baseline(RolloutEnv& env, const SodaConfig& config) {
  return train_approx(env, nullptr, config, ApproxMode::Cold);
}

double eval_auc(const ApproxCurve& curve) {
  if (curve.evals.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& e : curve.evals) acc += e.success;
  return acc / curve.evals.size();
}

long steps_to_eval_success(const ApproxCurve& curve, double threshold, long budget) {
  for (const auto& e : curve.evals)
    if (e.success >= threshold) return e.step;
  return budget + 1;
}

}  // namespace soda
