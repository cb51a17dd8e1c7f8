#include "soda/pointnav_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soda {

namespace {

double dist2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  double dx = a[0] - b[0], dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

bool finite_state(const PointState& s) {
  return std::isfinite(s.pos[0]) && std::isfinite(s.pos[1]) &&
         std::isfinite(s.vel[0]) && std::isfinite(s.vel[1]);
}

}  // namespace

void validate_spec(const PointNavSpec& spec) {
  if (spec.goal_radius <= 0.0 || spec.dt <= 0.0 || spec.thrust <= 0.0)
    throw std::invalid_argument("pointnav: non-positive goal_radius/dt/thrust");
  if (spec.drag < 0.0 || spec.drag >= 1.0)
    throw std::invalid_argument("pointnav: drag out of [0,1)");
  if (spec.max_steps <= 0) throw std::invalid_argument("pointnav: non-positive max_steps");
  for (int i = 0; i < 2; ++i) {
    if (spec.goal_center[i] - spec.goal_radius < 0.0 ||
        spec.goal_center[i] + spec.goal_radius > 1.0)
      throw std::invalid_argument("pointnav: goal disk leaves the unit square");
    if (spec.start_lo[i] > spec.start_hi[i])
      throw std::invalid_argument("pointnav: empty start region");
  }
  // Closest point of the start box to the goal center must lie outside the disk.
  double cx = std::clamp(spec.goal_center[0], spec.start_lo[0], spec.start_hi[0]);
  double cy = std::clamp(spec.goal_center[1], spec.start_lo[1], spec.start_hi[1]);
  if (dist2({cx, cy}, spec.goal_center) <= spec.goal_radius * spec.goal_radius)
    throw std::invalid_argument("pointnav: start region intersects the goal disk");
}

bool at_goal(const PointNavSpec& spec, const PointState& s) {
  return dist2(s.pos, spec.goal_center) <= spec.goal_radius * spec.goal_radius;
}

Step<PointState> point_step(const PointNavSpec& spec, const PointState& s,
                            PointAction a, int steps_taken) {
  if (!finite_state(s)) throw std::domain_error("point_step: non-finite state");
  if (at_goal(spec, s)) throw std::invalid_argument("point_step: stepping from a terminal state");

  double ax = 0.0, ay = 0.0;
  switch (a) {
    case PointAction::ThrustUp: ay = 1.0; break;
    case PointAction::ThrustDown: ay = -1.0; break;
    case PointAction::ThrustLeft: ax = -1.0; break;
    case PointAction::ThrustRight: ax = 1.0; break;
    case PointAction::NoOp: break;
  }

  Step<PointState> out;
  for (int i = 0; i < 2; ++i) {
    double acc = (i == 0 ? ax : ay) * spec.thrust;
    double v = (1.0 - spec.drag) * s.vel[i] + acc * spec.dt;
    v = std::clamp(v, -spec.v_max, spec.v_max);
    out.next.vel[i] = v;
    out.next.pos[i] = std::clamp(s.pos[i] + v * spec.dt, 0.0, 1.0);
  }
  bool reached = at_goal(spec, out.next);
  out.reward = reached ? 1.0 : 0.0;
  out.terminal = reached;
  out.truncated = !reached && steps_taken + 1 >= spec.max_steps;
  return out;
}

PointState sample_start(const PointNavSpec& spec, Rng& rng) {
  PointState s;
  for (int i = 0; i < 2; ++i)
    s.pos[i] = rng.uniform_real(spec.start_lo[i], spec.start_hi[i]);
  return s;
}

std::vector<double> point_observation(const PointState& s) {
  return {s.pos[0], s.pos[1], s.vel[0], s.vel[1]};
}

DemoQuality parse_quality(const std::string& name) {
  if (name == "optimal") return DemoQuality::Optimal;
  if (name == "suboptimal") return DemoQuality::Suboptimal;
  throw std::invalid_argument("unknown demo quality: " + name);
}

namespace {

// Accelerate along the axis with the largest remaining offset; brake when the
// drag-limited coasting distance (v * dt / drag) would overshoot the target.
PointAction seek_action(const PointNavSpec& spec, const PointState& s,
                        const std::array<double, 2>& target) {
  double dx = target[0] - s.pos[0];
  double dy = target[1] - s.pos[1];
  int axis = std::abs(dx) >= std::abs(dy) ? 0 : 1;
  double delta = axis == 0 ? dx : dy;
  double v = s.vel[axis];

  double coast = spec.drag > 0.0 ? std::abs(v) * spec.dt / spec.drag
                                 : std::abs(v) * spec.dt * spec.max_steps;
  bool toward = v * delta > 0.0;
  PointAction fwd, rev;
  if (axis == 0) {
    fwd = delta >= 0.0 ? PointAction::ThrustRight : PointAction::ThrustLeft;
    rev = delta >= 0.0 ? PointAction::ThrustLeft : PointAction::ThrustRight;
  } else {
    fwd = delta >= 0.0 ? PointAction::ThrustUp : PointAction::ThrustDown;
    rev = delta >= 0.0 ? PointAction::ThrustDown : PointAction::ThrustUp;
  }
  if (toward && coast > std::abs(delta)) return rev;
  return fwd;
}

}  // namespace

Trajectory scripted_demo(const PointNavSpec& spec, DemoQuality quality,
                         std::uint64_t seed) {
  validate_spec(spec);
  Rng rng(seed, 7);
  PointState s = sample_start(spec, rng);

  // Detour target for the suboptimal controller; fixed, off the direct route.
  const std::array<double, 2> waypoint{0.80, 0.05};
  const double waypoint_radius = 0.10;
  bool waypoint_done = quality == DemoQuality::Optimal;

  Trajectory traj;
  traj.env_id = spec.env_id;
  traj.states.push_back(point_observation(s));
  for (int step = 0; step < spec.max_steps; ++step) {
    if (!waypoint_done && dist2(s.pos, waypoint) <= waypoint_radius * waypoint_radius)
      waypoint_done = true;
    PointAction a = seek_action(spec, s, waypoint_done ? spec.goal_center : waypoint);
    Step<PointState> out = point_step(spec, s, a, step);
    traj.actions.push_back(static_cast<int>(a));
    traj.states.push_back(point_observation(out.next));
    s = out.next;
    if (out.terminal) {
      traj.success = true;
      return traj;
    }
  }
  throw std::runtime_error("scripted_demo: controller failed to reach the goal "
                           "within max_steps (seed " + std::to_string(seed) + ")");
}

}  // namespace soda
