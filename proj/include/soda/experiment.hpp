#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "soda/grid_env.hpp"
#include "soda/pointnav_env.hpp"
#include "soda/soda_agent.hpp"
#include "soda/tabular.hpp"

namespace soda {

// Strict configuration reader: every key must be consumed, unknown keys are
// rejected when finish() runs. Values read with a default are recorded into
// the resolved snapshot.
class ConfigReader {
 public:
  explicit ConfigReader(nlohmann::json cfg, std::string scope = "");

  template <class T>
  T get(const std::string& key, T fallback) {
    mark(key);
    T value = fallback;
    if (cfg_.contains(key)) value = read_as<T>(key);
    resolved_[key] = value;
    return value;
  }

  template <class T>
  T require(const std::string& key) {
    mark(key);
    if (!cfg_.contains(key))
      throw std::invalid_argument(scoped(key) + ": required config key missing");
    T value = read_as<T>(key);
    resolved_[key] = value;
    return value;
  }

  bool has(const std::string& key) const { return cfg_.contains(key); }

  // Nested object scope; consumes the key on the parent.
  ConfigReader section(const std::string& key);
  void absorb(const std::string& key, const ConfigReader& child);

  // Throws std::invalid_argument if any key was never consumed.
  void finish() const;

  const nlohmann::json& resolved() const { return resolved_; }

 private:
  template <class T>
  T read_as(const std::string& key) {
    try {
      return cfg_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(scoped(key) + ": bad value: " + e.what());
    }
  }

  void mark(const std::string& key) { consumed_.push_back(key); }
  std::string scoped(const std::string& key) const {
    return scope_.empty() ? key : scope_ + "." + key;
  }

  nlohmann::json cfg_;
  nlohmann::json resolved_ = nlohmann::json::object();
  std::vector<std::string> consumed_;
  std::string scope_;
};

nlohmann::json load_config_file(const std::string& path);

// FNV-1a over the compact JSON dump; used for cache keys and checkpoints.
std::uint64_t config_hash(const nlohmann::json& resolved);

std::vector<std::uint64_t> parse_seed_list(const std::string& csv);

// Environment selector: "easy" | "medium" | "hard" | "pointnav" | map path.
bool is_pointnav_selector(const std::string& env);
GridSpec resolve_grid_env(const std::string& env);
PointNavSpec resolve_pointnav(ConfigReader& reader);  // reads the "pointnav" section

// Oracle training with an on-disk cache keyed by map and config hashes.
// `trained` (optional) reports whether a fresh training run happened.
QTable cached_oracle(const GridSpec& spec, const OracleConfig& config,
                     const std::string& cache_dir, bool* trained = nullptr);

void write_resolved_config(const nlohmann::json& resolved, const std::string& path);

// Subcommand entry points. Each validates its configuration strictly, writes
// a resolved-config snapshot next to its outputs, and throws
// std::invalid_argument (usage) or std::runtime_error (fault) on error.
struct RunHooks {
  bool oracle_trained = false;
};

void run_collect_demos(const nlohmann::json& cfg, RunHooks* hooks = nullptr);
void run_train_tabular(const nlohmann::json& cfg);
void run_train_soda(const nlohmann::json& cfg, const std::string& forced_mode = "");
void run_regret_report(const nlohmann::json& cfg, RunHooks* hooks = nullptr);
void run_ablate(const nlohmann::json& cfg);
void run_eval(const nlohmann::json& cfg);

}  // namespace soda
