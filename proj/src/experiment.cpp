#include "soda/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "soda/csv.hpp"
#include "soda/regret.hpp"

namespace fs = std::filesystem;

namespace soda {

ConfigReader::ConfigReader(nlohmann::json cfg, std::string scope)
    : cfg_(std::move(cfg)), scope_(std::move(scope)) {
  if (!cfg_.is_object() && !cfg_.is_null())
    throw std::invalid_argument((scope_.empty() ? std::string("config") : scope_) +
                                ": expected a JSON object");
  if (cfg_.is_null()) cfg_ = nlohmann::json::object();
}

ConfigReader ConfigReader::section(const std::string& key) {
  mark(key);
  nlohmann::json sub = cfg_.contains(key) ? cfg_.at(key) : nlohmann::json::object();
  return ConfigReader(std::move(sub), scoped(key));
}

void ConfigReader::absorb(const std::string& key, const ConfigReader& child) {
  resolved_[key] = child.resolved();
}

void ConfigReader::finish() const {
  for (auto it = cfg_.begin(); it != cfg_.end(); ++it) {
    if (std::find(consumed_.begin(), consumed_.end(), it.key()) == consumed_.end())
      throw std::invalid_argument("unknown config key: " + scoped(it.key()));
  }
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": invalid JSON: " + e.what());
  }
  return j;
}

std::uint64_t config_hash(const nlohmann::json& resolved) {
  const std::string blob = resolved.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : blob) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    seeds.push_back(std::stoull(tok));
  }
  if (seeds.empty()) throw std::invalid_argument("empty seed list");
  return seeds;
}

bool is_pointnav_selector(const std::string& env) { return env == "pointnav"; }

GridSpec resolve_grid_env(const std::string& env) {
  if (env == "easy" || env == "medium" || env == "hard")
    return make_preset(parse_tier(env));
  if (env == "pointnav")
    throw std::invalid_argument("expected a grid environment, got 'pointnav'");
  return load_map_file(env);
}

PointNavSpec resolve_pointnav(ConfigReader& reader) {
  ConfigReader sec = reader.section("pointnav");
  PointNavSpec def;
  PointNavSpec spec;
  spec.goal_center[0] = sec.get("goal_x", def.goal_center[0]);
  spec.goal_center[1] = sec.get("goal_y", def.goal_center[1]);
  spec.goal_radius = sec.get("goal_radius", def.goal_radius);
  spec.dt = sec.get("dt", def.dt);
  spec.thrust = sec.get("thrust", def.thrust);
  spec.drag = sec.get("drag", def.drag);
  spec.max_steps = sec.get("max_steps", def.max_steps);
  spec.start_lo[0] = sec.get("start_lo_x", def.start_lo[0]);
  spec.start_lo[1] = sec.get("start_lo_y", def.start_lo[1]);
  spec.start_hi[0] = sec.get("start_hi_x", def.start_hi[0]);
  spec.start_hi[1] = sec.get("start_hi_y", def.start_hi[1]);
  spec.v_max = sec.get("v_max", def.v_max);
  sec.finish();
  reader.absorb("pointnav", sec);
  validate_spec(spec);
  return spec;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::uint64_t> read_seed_list(ConfigReader& reader) {
  return reader.get<std::vector<std::uint64_t>>("seed_list", {0});
}

OracleConfig read_oracle_config(ConfigReader& reader, double gamma) {
  OracleConfig oc;
  oc.episodes = reader.get("oracle_episodes", 100000);
  oc.max_steps = reader.get("oracle_max_steps", 100);
  oc.seed = reader.get<std::uint64_t>("oracle_seed", 1);
  oc.gamma = gamma;
  return oc;
}

SodaConfig read_soda_config(ConfigReader& reader) {
  SodaConfig cfg;
  cfg.gamma = reader.get("gamma", cfg.gamma);
  cfg.eps_start = reader.get("eps_start", cfg.eps_start);
  cfg.eps_end = reader.get("eps_end", cfg.eps_end);
  cfg.eps_decay_steps = reader.get("eps_decay_steps", cfg.eps_decay_steps);
  cfg.batch_size = reader.get("batch_size", cfg.batch_size);
  cfg.lr = reader.get("lr", cfg.lr);
  cfg.target_sync = reader.get("target_sync", cfg.target_sync);
  cfg.grad_steps_per_env_step =
      reader.get("grad_steps_per_env_step", cfg.grad_steps_per_env_step);
  cfg.n_bins = reader.get("n_bins", cfg.n_bins);
  cfg.hidden = reader.get("hidden", cfg.hidden);
  cfg.buffer_capacity = reader.get("buffer_capacity", cfg.buffer_capacity);
  cfg.total_steps = reader.get("total_steps", cfg.total_steps);
  cfg.eval_period = reader.get("eval_period", cfg.eval_period);
  cfg.eval_episodes = reader.get("eval_episodes", cfg.eval_episodes);
  cfg.mixed_demo_fraction = reader.get("mixed_demo_fraction", cfg.mixed_demo_fraction);
  return cfg;
}

std::unique_ptr<RolloutEnv> make_rollout_env(const std::string& env,
                                             ConfigReader& reader) {
  if (is_pointnav_selector(env))
    return std::make_unique<PointNavRolloutEnv>(resolve_pointnav(reader));
  return std::make_unique<GridRolloutEnv>(resolve_grid_env(env));
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

void write_tabular_curve(const std::string& path, std::uint64_t seed,
                         const LearningCurve& curve) {
  CsvWriter csv(path, "seed,episode,return,steps,success");
  for (const auto& rec : curve)
    csv.row({std::to_string(seed), std::to_string(rec.episode),
             fmt_double(rec.undiscounted_return), std::to_string(rec.steps),
             rec.success ? "1" : "0"});
}

void write_approx_curve(const std::string& path, std::uint64_t seed,
                        const ApproxCurve& curve) {
  CsvWriter csv(path, "seed,step,episode,return,success,eval_success,loss_online,loss_demo");
  for (const auto& row : curve.episodes)
    csv.row({std::to_string(seed), std::to_string(row.step), std::to_string(row.episode),
             fmt_double(row.undiscounted_return), row.success ? "1" : "0",
             fmt_double(row.eval_success), fmt_double(row.loss_online),
             fmt_double(row.loss_demo)});
}

void write_heatmap(const std::string& path, const GridSpec& spec,
                   const StateDistribution& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      if (c) out << ",";
      out << fmt_double(d.mass[spec.cell_at(r, c)]);
    }
    out << "\n";
  }
}

}  // namespace

QTable cached_oracle(const GridSpec& spec, const OracleConfig& config,
                     const std::string& cache_dir, bool* trained) {
  if (trained) *trained = false;
  std::string path;
  if (!cache_dir.empty()) {
    nlohmann::json key;
    key["episodes"] = config.episodes;
    key["max_steps"] = config.max_steps;
    key["gamma"] = config.gamma;
    key["seed"] = config.seed;
    path = cache_dir + "/oracle_" + hex64(map_hash(spec)) + "_" +
           hex64(config_hash(key)) + ".csv";
    if (fs::exists(path)) {
      QTableSnapshot snap = load_qtable(path);
      if (snap.table.n_states == spec.n_cells() &&
          snap.table.n_actions == kGridActionCount)
        return snap.table;
    }
  }
  QTable q = train_oracle(spec, config);
  if (trained) *trained = true;
  if (!path.empty()) {
    ensure_dir(cache_dir);
    save_qtable(q, spec.map_id, path);
  }
  return q;
}

void write_resolved_config(const nlohmann::json& resolved, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << resolved.dump(2) << "\n";
}

void run_collect_demos(const nlohmann::json& cfg, RunHooks* hooks) {
  ConfigReader reader(cfg);
  const std::string env = reader.require<std::string>("env");
  const int n = reader.require<int>("n");
  const std::string out = reader.require<std::string>("out");
  const std::string quality = reader.get<std::string>("quality", "optimal");
  const std::uint64_t seed = reader.get<std::uint64_t>("seed", 0);
  const double gamma = reader.get("gamma", 0.99);
  const std::string cache_dir = reader.get<std::string>("cache_dir", "");
  OracleConfig oracle_cfg = read_oracle_config(reader, gamma);

  if (n <= 0) throw std::invalid_argument("collect-demos: n must be positive");

  std::vector<Trajectory> trajectories;
  std::vector<std::string> failures;
  if (is_pointnav_selector(env)) {
    PointNavSpec spec = resolve_pointnav(reader);
    reader.finish();
    DemoQuality q = parse_quality(quality);
    for (int i = 0; i < n; ++i) {
      try {
        trajectories.push_back(scripted_demo(spec, q, seed + i));
      } catch (const std::runtime_error& e) {
        failures.push_back(e.what());
      }
    }
  } else {
    GridSpec spec = resolve_grid_env(env);
    reader.finish();
    bool trained = false;
    QTable oracle = cached_oracle(spec, oracle_cfg, cache_dir, &trained);
    if (hooks) hooks->oracle_trained = hooks->oracle_trained || trained;
    for (int i = 0; i < n; ++i) {
      Trajectory t = greedy_rollout(spec, oracle);
      if (!t.success)
        failures.push_back("greedy rollout " + std::to_string(i) + " failed");
      else
        trajectories.push_back(std::move(t));
    }
  }
  if (!failures.empty()) {
    std::string msg = "collect-demos: unsuccessful rollouts:";
    for (const auto& f : failures) msg += "\n  " + f;
    throw std::runtime_error(msg);
  }

  if (fs::path(out).has_parent_path()) ensure_dir(fs::path(out).parent_path().string());
  save_demos(make_demo_set(std::move(trajectories)), out);
  write_resolved_config(reader.resolved(), out + ".config.json");
}

void run_train_tabular(const nlohmann::json& cfg) {
  ConfigReader reader(cfg);
  const std::string env = reader.require<std::string>("env");
  const std::string out = reader.require<std::string>("out");
  const std::vector<std::uint64_t> seeds = read_seed_list(reader);
  TrainConfig base;
  base.episodes = reader.get("episodes", 10000);
  base.max_steps = reader.get("max_steps", 100);
  base.alpha = reader.get("alpha", 0.1);
  base.gamma = reader.get("gamma", 0.99);
  base.epsilon = reader.get("epsilon", 0.1);
  const std::string init = reader.get<std::string>("init", "cold");
  const std::string demo_path = reader.get<std::string>("demos", "");
  reader.finish();

  if (init != "cold" && init != "warm")
    throw std::invalid_argument("train-tabular: init must be 'cold' or 'warm'");
  if (init == "warm" && demo_path.empty())
    throw std::invalid_argument("train-tabular: warm init requires a demo file");

  GridSpec spec = resolve_grid_env(env);
  std::optional<DemoSet> demos;
  if (init == "warm") demos = load_demos(demo_path);

  ensure_dir(out);
  write_resolved_config(reader.resolved(), out + "/config.resolved.json");

  std::vector<LearningCurve> curves;
  for (std::uint64_t seed : seeds) {
    TrainConfig tc = base;
    tc.seed = seed;
    TrainResult result = train(spec, tc, demos ? &*demos : nullptr);
    write_tabular_curve(out + "/seed_" + std::to_string(seed) + "_curve.csv", seed,
                        result.curve);
    save_qtable(result.q, spec.map_id,
                out + "/seed_" + std::to_string(seed) + "_qtable.csv");
    curves.push_back(std::move(result.curve));
  }

  CsvWriter agg(out + "/aggregate.csv",
                "episode,mean_return,std_return,mean_steps,mean_success");
  const int n_seeds = static_cast<int>(curves.size());
  for (int e = 0; e < base.episodes; ++e) {
    double mr = 0.0, ms = 0.0, msc = 0.0;
    for (const auto& c : curves) {
      mr += c[e].undiscounted_return;
      ms += c[e].steps;
      msc += c[e].success ? 1.0 : 0.0;
    }
    mr /= n_seeds;
    ms /= n_seeds;
    msc /= n_seeds;
    double var = 0.0;
    for (const auto& c : curves) {
      double d = c[e].undiscounted_return - mr;
      var += d * d;
    }
    double sd = n_seeds > 1 ? std::sqrt(var / (n_seeds - 1)) : 0.0;
    agg.row({std::to_string(e), fmt_double(mr), fmt_double(sd), fmt_double(ms),
             fmt_double(msc)});
  }
}

void run_train_soda(const nlohmann::json& cfg, const std::string& forced_mode) {
  ConfigReader reader(cfg);
  const std::string env = reader.get<std::string>("env", "pointnav");
  const std::string out = reader.require<std::string>("out");
  const std::vector<std::uint64_t> seeds = read_seed_list(reader);
  const std::string mode_name =
      forced_mode.empty() ? reader.get<std::string>("mode", "soda")
                          : reader.get<std::string>("mode", forced_mode);
  const std::string demo_path = reader.get<std::string>("demos", "");
  SodaConfig base = read_soda_config(reader);
  std::unique_ptr<RolloutEnv> proto = make_rollout_env(env, reader);
  reader.finish();

  ApproxMode mode;
  if (mode_name == "soda") mode = ApproxMode::Soda;
  else if (mode_name == "mixed") mode = ApproxMode::Mixed;
  else if (mode_name == "cold") mode = ApproxMode::Cold;
  else throw std::invalid_argument("train-soda: unknown mode '" + mode_name + "'");

  const bool needs_demos =
      mode == ApproxMode::Soda ||
      (mode == ApproxMode::Mixed && base.mixed_demo_fraction > 0.0);
  if (needs_demos && demo_path.empty())
    throw std::invalid_argument("train-soda: mode '" + mode_name + "' requires demos");
  std::optional<DemoSet> demos;
  if (!demo_path.empty()) demos = load_demos(demo_path);

  ensure_dir(out);
  write_resolved_config(reader.resolved(), out + "/config.resolved.json");
  const std::uint64_t cfg_hash = config_hash(reader.resolved());

  std::vector<ApproxCurve> curves;
  for (std::uint64_t seed : seeds) {
    SodaConfig sc = base;
    sc.seed = seed;
    std::unique_ptr<RolloutEnv> run_env = proto->clone();
    SodaResult result = train_approx(*run_env, demos ? &*demos : nullptr, sc, mode);
    write_approx_curve(out + "/seed_" + std::to_string(seed) + "_curve.csv", seed,
                       result.curve);
    save_checkpoint(result.net, cfg_hash,
                    out + "/seed_" + std::to_string(seed) + ".ckpt");
    curves.push_back(std::move(result.curve));
  }

  CsvWriter agg(out + "/aggregate_eval.csv", "step,mean_eval_success,std_eval_success");
  if (!curves.empty()) {
    const std::size_t points = curves.front().evals.size();
    for (std::size_t i = 0; i < points; ++i) {
      double mean = 0.0;
      for (const auto& c : curves) mean += c.evals[i].success;
      mean /= curves.size();
      double var = 0.0;
      for (const auto& c : curves) {
        double d = c.evals[i].success - mean;
        var += d * d;
      }
      double sd = curves.size() > 1 ? std::sqrt(var / (curves.size() - 1)) : 0.0;
      agg.row({std::to_string(curves.front().evals[i].step), fmt_double(mean),
               fmt_double(sd)});
    }
  }
}

void run_regret_report(const nlohmann::json& cfg, RunHooks* hooks) {
  ConfigReader reader(cfg);
  const std::string env = reader.get<std::string>("env", "all");
  const std::string out = reader.require<std::string>("out");
  const std::vector<std::uint64_t> seeds = read_seed_list(reader);
  const double epsilon = reader.get("epsilon", 0.2);
  const int n_rollouts = reader.get("n_rollouts", 1000);
  const double gamma = reader.get("gamma", 0.99);
  OracleConfig oracle_cfg = read_oracle_config(reader, gamma);
  const std::string cache_dir =
      reader.get<std::string>("cache_dir", out + "/oracle_cache");
  reader.finish();

  std::vector<std::string> tiers;
  if (env == "all") tiers = {"easy", "medium", "hard"};
  else tiers = {env};

  ensure_dir(out);
  write_resolved_config(reader.resolved(), out + "/config.resolved.json");

  // rows[tier][policy][dist] per seed
  struct Row {
    std::string tier, policy, dist;
    std::vector<double> values;
  };
  std::vector<Row> rows;

  for (const std::string& tier : tiers) {
    GridSpec spec = resolve_grid_env(tier);
    bool trained = false;
    QTable oracle = cached_oracle(spec, oracle_cfg, cache_dir, &trained);
    if (hooks) hooks->oracle_trained = hooks->oracle_trained || trained;

    DemoSet demo = make_demo_set({greedy_rollout(spec, oracle)});
    QTable warm(spec.n_cells(), kGridActionCount);
    warm_start_q(warm, demo, gamma);
    QTable cold(spec.n_cells(), kGridActionCount);

    Row wu{tier, "warm", "uniform", {}}, wt{tier, "warm", "onpolicy", {}};
    Row cu{tier, "cold", "uniform", {}}, ct{tier, "cold", "onpolicy", {}};
    for (std::uint64_t seed : seeds) {
      RegretReport w = report(spec, warm, oracle, epsilon, n_rollouts, seed, "warm");
      RegretReport c = report(spec, cold, oracle, epsilon, n_rollouts, seed, "cold");
      wu.values.push_back(w.regret_uniform);
      wt.values.push_back(w.regret_onpolicy);
      cu.values.push_back(c.regret_uniform);
      ct.values.push_back(c.regret_onpolicy);
    }
    rows.push_back(wu);
    rows.push_back(wt);
    rows.push_back(cu);
    rows.push_back(ct);

    // State-visitation heatmaps for the first seed, one per policy.
    const std::uint64_t seed0 = seeds.front();
    auto heat = [&](const QTable& q, const std::string& name) {
      DiscretePolicy pi = epsilon_greedy_policy(q, epsilon);
      StateDistribution d =
          estimate_onpolicy_distribution(spec, pi, n_rollouts, spec.max_steps, seed0);
      write_heatmap(out + "/heatmap_" + tier + "_" + name + ".csv", spec, d);
    };
    heat(oracle, "converged");
    heat(warm, "warm");
    heat(cold, "cold");
  }

  for (std::size_t si = 0; si < seeds.size(); ++si) {
    CsvWriter csv(out + "/regret_seed_" + std::to_string(seeds[si]) + ".csv",
                  "difficulty,policy,dist,regret");
    for (const auto& r : rows)
      csv.row({r.tier, r.policy, r.dist, fmt_double(r.values[si])});
  }
  CsvWriter mean_csv(out + "/regret_mean.csv", "difficulty,policy,dist,regret");
  for (const auto& r : rows) {
    double m = 0.0;
    for (double v : r.values) m += v;
    mean_csv.row({r.tier, r.policy, r.dist, fmt_double(m / r.values.size())});
  }
}

void run_ablate(const nlohmann::json& cfg) {
  ConfigReader reader(cfg);
  const std::string axis = reader.require<std::string>("axis");
  const std::string env = reader.get<std::string>("env", "pointnav");
  const std::string out = reader.require<std::string>("out");
  const std::vector<std::uint64_t> seeds = read_seed_list(reader);
  const std::vector<int> demo_counts =
      reader.get<std::vector<int>>("demo_counts", {1, 5, 10, 50});
  const int n_demos = reader.get("n_demos", 10);
  const std::uint64_t demo_seed = reader.get<std::uint64_t>("demo_seed", 0);
  SodaConfig base = read_soda_config(reader);
  if (!is_pointnav_selector(env))
    throw std::invalid_argument("ablate: scripted demonstrators require the pointnav env");
  PointNavSpec spec = resolve_pointnav(reader);
  reader.finish();

  if (axis != "demo-count" && axis != "demo-quality")
    throw std::invalid_argument("ablate: unknown axis '" + axis + "'");

  ensure_dir(out);
  write_resolved_config(reader.resolved(), out + "/config.resolved.json");

  auto collect = [&](int n, DemoQuality q) {
    std::vector<Trajectory> trajs;
    for (int i = 0; i < n; ++i) trajs.push_back(scripted_demo(spec, q, demo_seed + i));
    return make_demo_set(std::move(trajs));
  };

  CsvWriter csv(out + "/ablation.csv", "axis_value,seed,step,eval_success");
  auto run_setting = [&](const std::string& label, const DemoSet& demos) {
    for (std::uint64_t seed : seeds) {
      SodaConfig sc = base;
      sc.seed = seed;
      PointNavRolloutEnv run_env(spec);
      SodaResult r = train_soda(run_env, demos, sc);
      for (const auto& e : r.curve.evals)
        csv.row({label, std::to_string(seed), std::to_string(e.step),
                 fmt_double(e.success)});
    }
  };

  if (axis == "demo-count") {
    for (int n : demo_counts)
      run_setting(std::to_string(n), collect(n, DemoQuality::Optimal));
  } else {
    run_setting("optimal", collect(n_demos, DemoQuality::Optimal));
    run_setting("suboptimal", collect(n_demos, DemoQuality::Suboptimal));
  }
}

void run_eval(const nlohmann::json& cfg) {
  ConfigReader reader(cfg);
  const std::string env = reader.require<std::string>("env");
  const std::string qtable_path = reader.get<std::string>("qtable", "");
  const std::string ckpt_path = reader.get<std::string>("checkpoint", "");
  const int episodes = reader.get("episodes", 20);
  const std::uint64_t seed = reader.get<std::uint64_t>("seed", 0);

  if (qtable_path.empty() == ckpt_path.empty())
    throw std::invalid_argument("eval: pass exactly one of 'qtable' or 'checkpoint'");

  double rate = 0.0;
  if (!qtable_path.empty()) {
    reader.finish();
    GridSpec spec = resolve_grid_env(env);
    QTableSnapshot snap = load_qtable(qtable_path);
    if (snap.table.n_states != spec.n_cells())
      throw std::invalid_argument("eval: qtable does not match the environment");
    int ok = 0;
    for (int i = 0; i < episodes; ++i)
      ok += greedy_rollout(spec, snap.table).success ? 1 : 0;
    rate = static_cast<double>(ok) / episodes;
  } else {
    std::unique_ptr<RolloutEnv> e = make_rollout_env(env, reader);
    reader.finish();
    Checkpoint ck = load_checkpoint(ckpt_path);
    CategoricalHead head{ck.net.shape.n_bins, 0.0, 1.0};
    Rng rng(seed, 99);
    rate = evaluate_greedy(*e, ck.net, head, episodes, rng);
  }
  std::printf("success_rate=%s\n", fmt_double(rate).c_str());
}

}  // namespace soda
