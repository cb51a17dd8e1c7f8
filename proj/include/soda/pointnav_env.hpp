#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "soda/demos.hpp"
#include "soda/grid_env.hpp"
#include "soda/rng.hpp"

namespace soda {

enum class PointAction : int {
  ThrustUp = 0,
  ThrustDown = 1,
  ThrustLeft = 2,
  ThrustRight = 3,
  NoOp = 4,
};
inline constexpr int kPointActionCount = 5;

struct PointState {
  std::array<double, 2> pos{0.0, 0.0};
  std::array<double, 2> vel{0.0, 0.0};
};

// Continuous-state, discrete-action navigation in the unit square. A thrust
// action accelerates the point mass along one axis, drag decays velocity, and
// the sparse reward is paid when the position enters the goal disk.
struct PointNavSpec {
  std::array<double, 2> goal_center{0.85, 0.85};
  double goal_radius = 0.07;
  double dt = 0.1;
  double thrust = 1.0;
  double drag = 0.1;
  int max_steps = 200;
  std::array<double, 2> start_lo{0.05, 0.05};
  std::array<double, 2> start_hi{0.25, 0.25};
  double v_max = 1.0;
  std::string env_id = "pointnav";
};

// Throws std::invalid_argument when the goal disk leaves the unit square or
// overlaps the start region.
void validate_spec(const PointNavSpec& spec);

bool at_goal(const PointNavSpec& spec, const PointState& s);

// Pure transition: velocity decays by drag and gains one thrust impulse,
// position integrates one explicit-Euler step and clamps to the unit square.
Step<PointState> point_step(const PointNavSpec& spec, const PointState& s,
                            PointAction a, int steps_taken = 0);

PointState sample_start(const PointNavSpec& spec, Rng& rng);

// Observation layout fed to function approximation: [px, py, vx, vy].
std::vector<double> point_observation(const PointState& s);

enum class DemoQuality { Optimal, Suboptimal };
DemoQuality parse_quality(const std::string& name);

// Deterministic scripted controllers rolled out from a seeded start state.
// The optimal controller thrusts along the largest remaining goal offset and
// brakes when coasting would overshoot; the suboptimal one detours through a
// fixed off-path waypoint first. Throws std::runtime_error if the rollout
// fails to reach the goal within the step budget.
Trajectory scripted_demo(const PointNavSpec& spec, DemoQuality quality,
                         std::uint64_t seed);

}  // namespace soda
