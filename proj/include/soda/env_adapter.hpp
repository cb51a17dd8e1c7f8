#pragma once

#include <memory>
#include <string>
#include <vector>

#include "soda/grid_env.hpp"
#include "soda/pointnav_env.hpp"
#include "soda/rng.hpp"

namespace soda {

// Episodic rollout interface for agents that consume observation vectors.
// Implementations own the current episode state; reset() starts a fresh
// episode and step() advances it.
class RolloutEnv {
 public:
  virtual ~RolloutEnv() = default;
  virtual int n_actions() const = 0;
  virtual int obs_dim() const = 0;
  virtual std::string env_id() const = 0;
  virtual std::vector<double> reset(Rng& rng) = 0;
  virtual Step<std::vector<double>> step(int action) = 0;
  virtual std::unique_ptr<RolloutEnv> clone() const = 0;
};

// Grid cells exposed as normalized (x, y) coordinates.
class GridRolloutEnv final : public RolloutEnv {
 public:
  explicit GridRolloutEnv(GridSpec spec) : spec_(std::move(spec)) {}

  int n_actions() const override { return kGridActionCount; }
  int obs_dim() const override { return 2; }
  std::string env_id() const override { return spec_.map_id; }

  std::vector<double> reset(Rng&) override {
    state_ = GridState{spec_.start};
    steps_ = 0;
    return grid_observation(spec_, state_);
  }

  Step<std::vector<double>> step(int action) override {
    Step<GridState> out = grid_step(spec_, state_, static_cast<GridAction>(action), steps_);
    ++steps_;
    state_ = out.next;
    return {grid_observation(spec_, out.next), out.reward, out.terminal, out.truncated};
  }

  std::unique_ptr<RolloutEnv> clone() const override {
    return std::make_unique<GridRolloutEnv>(*this);
  }

  const GridSpec& spec() const { return spec_; }

 private:
  GridSpec spec_;
  GridState state_{};
  int steps_ = 0;
};

class PointNavRolloutEnv final : public RolloutEnv {
 public:
  explicit PointNavRolloutEnv(PointNavSpec spec) : spec_(std::move(spec)) {
    validate_spec(spec_);
  }

  int n_actions() const override { return kPointActionCount; }
  int obs_dim() const override { return 4; }
  std::string env_id() const override { return spec_.env_id; }

  std::vector<double> reset(Rng& rng) override {
    state_ = sample_start(spec_, rng);
    steps_ = 0;
    return point_observation(state_);
  }

  Step<std::vector<double>> step(int action) override {
    Step<PointState> out =
        point_step(spec_, state_, static_cast<PointAction>(action), steps_);
    ++steps_;
    state_ = out.next;
    return {point_observation(out.next), out.reward, out.terminal, out.truncated};
  }

  std::unique_ptr<RolloutEnv> clone() const override {
    return std::make_unique<PointNavRolloutEnv>(*this);
  }

  const PointNavSpec& spec() const { return spec_; }

 private:
  PointNavSpec spec_;
  PointState state_{};
  int steps_ = 0;
};

}  // namespace soda
