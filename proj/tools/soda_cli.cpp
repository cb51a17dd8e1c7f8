// Command-line experiment runner: environments, agents, and regret analytics
// wired into reproducible subcommands that emit CSV results.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "soda/experiment.hpp"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::string seed_list;
  std::string out;
  std::string env;
};

// Config file first, command-line overrides on top.
nlohmann::json merged_config(const GlobalFlags& flags) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!flags.config_path.empty()) cfg = soda::load_config_file(flags.config_path);
  if (!flags.seed_list.empty()) cfg["seed_list"] = soda::parse_seed_list(flags.seed_list);
  if (!flags.out.empty()) cfg["out"] = flags.out;
  if (!flags.env.empty()) cfg["env"] = flags.env;
  return cfg;
}

void add_global_flags(CLI::App* cmd, GlobalFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--seed-list", flags.seed_list, "comma-separated seeds");
  cmd->add_option("--out", flags.out, "output directory (or file for collect-demos)");
  cmd->add_option("--env", flags.env, "easy|medium|hard|pointnav|<map path>");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse-reward Q-learning toolkit"};
  app.require_subcommand(1);

  GlobalFlags flags;
  nlohmann::json extra = nlohmann::json::object();

  auto* collect = app.add_subcommand("collect-demos", "roll out demonstrators to JSONL");
  add_global_flags(collect, flags);
  int n_demos = 0;
  std::string quality;
  std::uint64_t seed = 0;
  bool seed_set = false;
  collect->add_option("--n", n_demos, "number of demonstrations");
  collect->add_option("--quality", quality, "optimal|suboptimal");
  collect->add_option("--seed", seed, "base seed")->each([&](const std::string&) {
    seed_set = true;
  });

  auto* train_tab = app.add_subcommand("train-tabular", "tabular Q-learning runs");
  add_global_flags(train_tab, flags);
  std::string init, demo_path;
  train_tab->add_option("--init", init, "cold|warm");
  train_tab->add_option("--demos", demo_path, "demo JSONL (warm init)");

  auto* train_soda = app.add_subcommand("train-soda", "dual-buffer categorical agent");
  add_global_flags(train_soda, flags);
  train_soda->add_option("--demos", demo_path, "demo JSONL");

  auto* train_base = app.add_subcommand("train-baseline", "mixed-batch / cold baselines");
  add_global_flags(train_base, flags);
  std::string mode;
  train_base->add_option("--demos", demo_path, "demo JSONL");
  train_base->add_option("--mode", mode, "mixed|cold");

  auto* regret = app.add_subcommand("regret-report", "regret table + visitation heatmaps");
  add_global_flags(regret, flags);

  auto* ablate = app.add_subcommand("ablate", "demo-count / demo-quality sweeps");
  add_global_flags(ablate, flags);
  std::string axis;
  ablate->add_option("--axis", axis, "demo-count|demo-quality");

  auto* eval = app.add_subcommand("eval", "greedy evaluation of a saved agent");
  add_global_flags(eval, flags);
  std::string qtable_path, ckpt_path;
  int eval_episodes = 0;
  eval->add_option("--qtable", qtable_path, "qtable CSV snapshot");
  eval->add_option("--checkpoint", ckpt_path, "net checkpoint");
  eval->add_option("--episodes", eval_episodes, "evaluation episodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    nlohmann::json cfg = merged_config(flags);
    if (collect->parsed()) {
      if (n_demos > 0 || collect->count("--n")) cfg["n"] = n_demos;
      if (!quality.empty()) cfg["quality"] = quality;
      if (seed_set) cfg["seed"] = seed;
      soda::run_collect_demos(cfg);
    } else if (train_tab->parsed()) {
      if (!init.empty()) cfg["init"] = init;
      if (!demo_path.empty()) cfg["demos"] = demo_path;
      soda::run_train_tabular(cfg);
    } else if (train_soda->parsed()) {
      if (!demo_path.empty()) cfg["demos"] = demo_path;
      soda::run_train_soda(cfg, "soda");
    } else if (train_base->parsed()) {
      if (!demo_path.empty()) cfg["demos"] = demo_path;
      if (!mode.empty()) cfg["mode"] = mode;
      soda::run_train_soda(cfg, "mixed");
    } else if (regret->parsed()) {
      soda::run_regret_report(cfg);
    } else if (ablate->parsed()) {
      if (!axis.empty()) cfg["axis"] = axis;
      soda::run_ablate(cfg);
    } else if (eval->parsed()) {
      if (!qtable_path.empty()) cfg["qtable"] = qtable_path;
      if (!ckpt_path.empty()) cfg["checkpoint"] = ckpt_path;
      if (eval_episodes > 0) cfg["episodes"] = eval_episodes;
      soda::run_eval(cfg);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fault: %s\n", e.what());
    return 1;
  }
  return 0;
}
