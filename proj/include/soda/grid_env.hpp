#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace soda {

enum class GridAction : int { Up = 0, Down = 1, Left = 2, Right = 3 };
inline constexpr int kGridActionCount = 4;

struct GridState {
  int cell = 0;
};

// One transition result. `next` is the state after the move, `truncated`
// marks step-budget exhaustion on a non-terminal transition.
template <class StateT>
struct Step {
  StateT next{};
  double reward = 0.0;
  bool terminal = false;
  bool truncated = false;
};

// Deterministic sparse-reward grid. Cells are row-major indices; the agent
// starts at `start`, reward 1 is paid exactly when the goal cell is entered,
// holes terminate the episode with reward 0.
struct GridSpec {
  int width = 0;
  int height = 0;
  int start = 0;
  int goal = 0;
  std::vector<std::uint8_t> hole_mask;  // width*height cells
  bool wrap_around = false;
  int max_steps = 100;
  std::string map_id;

  int n_cells() const { return width * height; }
  int row_of(int cell) const { return cell / width; }
  int col_of(int cell) const { return cell % width; }
  int cell_at(int row, int col) const { return row * width + col; }
  bool is_hole(int cell) const { return hole_mask[cell] != 0; }
  bool is_terminal_cell(int cell) const { return cell == goal || is_hole(cell); }
  std::vector<int> hole_cells() const;
};

// Validates all GridSpec invariants; throws std::invalid_argument on violation.
GridSpec make_grid_spec(int width, int height, int start, int goal,
                        const std::vector<int>& holes, bool wrap_around,
                        int max_steps, std::string map_id);

// Pure transition function. `steps_taken` is the number of steps already
// executed in the episode; the outcome is truncated when the budget is
// exhausted without reaching a terminal cell. Stepping from a terminal state
// throws std::invalid_argument.
Step<GridState> grid_step(const GridSpec& spec, GridState s, GridAction a,
                          int steps_taken = 0);

// All states in row-major order, exactly once.
std::vector<GridState> enumerate_states(const GridSpec& spec);

enum class GridTier { Easy, Medium, Hard };

// Frozen preset maps of increasing size and hole count.
GridSpec make_preset(GridTier tier);
GridTier parse_tier(const std::string& name);

// Text map format: one row per line, S = start, G = goal, H = hole,
// F = free. Parser validates the spec invariants.
GridSpec parse_map_text(const std::string& text, bool wrap_around,
                        int max_steps, std::string map_id);
GridSpec load_map_file(const std::string& path, bool wrap_around = false,
                       int max_steps = 100);
std::string map_text(const GridSpec& spec);

// BFS distance from every cell to the goal avoiding holes; -1 if unreachable.
std::vector<int> goal_distances(const GridSpec& spec);
int shortest_path_length(const GridSpec& spec);  // start -> goal, -1 if none

// Manhattan distance start->goal, torus metric on wrap grids.
int manhattan_start_goal(const GridSpec& spec);

// Stable content hash over layout + dynamics, used for caches and demo
// compatibility checks.
std::uint64_t map_hash(const GridSpec& spec);

// Normalized (col, row) coordinates in [0,1]^2 for function approximation.
std::vector<double> grid_observation(const GridSpec& spec, GridState s);

}  // namespace soda
