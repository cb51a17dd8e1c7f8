#include "soda/grid_env.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace soda {

std::vector<int> GridSpec::hole_cells() const {
  std::vector<int> out;
  for (int c = 0; c < n_cells(); ++c)
    if (hole_mask[c]) out.push_back(c);
  return out;
}

GridSpec make_grid_spec(int width, int height, int start, int goal,
                        const std::vector<int>& holes, bool wrap_around,
                        int max_steps, std::string map_id) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("grid: non-positive dimensions");
  GridSpec spec;
  spec.width = width;
  spec.height = height;
  spec.start = start;
  spec.goal = goal;
  spec.wrap_around = wrap_around;
  spec.max_steps = max_steps;
  spec.map_id = std::move(map_id);
  spec.hole_mask.assign(width * height, 0);
  for (int h : holes) {
    if (h < 0 || h >= spec.n_cells()) throw std::invalid_argument("grid: hole index out of range");
    spec.hole_mask[h] = 1;
  }
  if (start < 0 || start >= spec.n_cells() || goal < 0 || goal >= spec.n_cells())
    throw std::invalid_argument("grid: start/goal out of range");
  if (start == goal) throw std::invalid_argument("grid: start equals goal");
  if (spec.is_hole(start) || spec.is_hole(goal))
    throw std::invalid_argument("grid: start/goal must not be holes");
  if (max_steps < manhattan_start_goal(spec))
    throw std::invalid_argument("grid: max_steps below start->goal distance");
  return spec;
}

Step<GridState> grid_step(const GridSpec& spec, GridState s, GridAction a,
                          int steps_taken) {
  if (s.cell < 0 || s.cell >= spec.n_cells())
    throw std::invalid_argument("grid_step: state out of range");
  if (spec.is_terminal_cell(s.cell))
    throw std::invalid_argument("grid_step: stepping from a terminal state");

  int row = spec.row_of(s.cell);
  int col = spec.col_of(s.cell);
  int dr = 0, dc = 0;
  switch (a) {
    case GridAction::Up: dr = -1; break;
    case GridAction::Down: dr = 1; break;
    case GridAction::Left: dc = -1; break;
    case GridAction::Right: dc = 1; break;
  }
  int nr = row + dr, nc = col + dc;
  if (spec.wrap_around) {
    nr = (nr + spec.height) % spec.height;
    nc = (nc + spec.width) % spec.width;
  } else {
    nr = std::clamp(nr, 0, spec.height - 1);
    nc = std::clamp(nc, 0, spec.width - 1);
  }

  Step<GridState> out;
  out.next = GridState{spec.cell_at(nr, nc)};
  out.reward = out.next.cell == spec.goal ? 1.0 : 0.0;
  out.terminal = spec.is_terminal_cell(out.next.cell);
  out.truncated = !out.terminal && steps_taken + 1 >= spec.max_steps;
  return out;
}

std::vector<GridState> enumerate_states(const GridSpec& spec) {
  std::vector<GridState> states;
  states.reserve(spec.n_cells());
  for (int c = 0; c < spec.n_cells(); ++c) states.push_back(GridState{c});
  return states;
}

namespace {

// Frozen golden maps. Layouts are repository fixtures chosen so that each
// tier is BFS-solvable and the shortest path keeps some clearance from holes.
constexpr const char* kEasyMap =
    "SFFFF\n"
    "FHFFF\n"
    "HFFFF\n"
    "FFFHF\n"
    "FFFFG\n";

constexpr const char* kMediumMap =
    "SFFHFFFFF\n"
    "FHFFFFHFF\n"
    "FFFFHFFFF\n"
    "HFFFFFFHF\n"
    "FFHFFFFFF\n"
    "FFFFFHFFH\n"
    "FHFFFFFFF\n"
    "FFFFHFFHF\n"
    "FFFFFFFFG\n";

constexpr const char* kHardMap =
    "SFFFHFFFFHFFF\n"
    "FFHFFFFHFFFHF\n"
    "HFFFFHFFFFHFF\n"
    "FFFHFFFFFHFFF\n"
    "FHFFFFHFFFFFF\n"
    "FFFFHFFFFFFHF\n"
    "FFHFFFFFHFFFH\n"
    "HFFFFFHFFFFFF\n"
    "FFFFHFFFFFHFF\n"
    "FFHFFFFFHFFFF\n"
    "FHFFFFHFFFFHF\n"
    "FFFFHFFFHFFFF\n"
    "FFFFFFFHFFHFG\n";

}  // namespace

GridSpec make_preset(GridTier tier) {
  switch (tier) {
    case GridTier::Easy: return parse_map_text(kEasyMap, false, 100, "easy");
    case GridTier::Medium: return parse_map_text(kMediumMap, false, 100, "medium");
    case GridTier::Hard: return parse_map_text(kHardMap, false, 100, "hard");
  }
  throw std::invalid_argument("unknown tier");
}

GridTier parse_tier(const std::string& name) {
  if (name == "easy") return GridTier::Easy;
  if (name == "medium") return GridTier::Medium;
  if (name == "hard") return GridTier::Hard;
  throw std::invalid_argument("unknown difficulty tier: " + name);
}

GridSpec parse_map_text(const std::string& text, bool wrap_around,
                        int max_steps, std::string map_id) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  if (rows.empty()) throw std::invalid_argument("map: empty layout");
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows[0].size());
  int start = -1, goal = -1;
  std::vector<int> holes;
  for (int r = 0; r < height; ++r) {
    if (static_cast<int>(rows[r].size()) != width)
      throw std::invalid_argument("map: ragged rows");
    for (int c = 0; c < width; ++c) {
      int cell = r * width + c;
      switch (rows[r][c]) {
        case 'S':
          if (start >= 0) throw std::invalid_argument("map: multiple start cells");
          start = cell;
          break;
        case 'G':
          if (goal >= 0) throw std::invalid_argument("map: multiple goal cells");
          goal = cell;
          break;
        case 'H': holes.push_back(cell); break;
        case 'F': break;
        default:
          throw std::invalid_argument(std::string("map: unknown cell character '") +
                                      rows[r][c] + "'");
      }
    }
  }
  if (start < 0 || goal < 0) throw std::invalid_argument("map: missing S or G");
  return make_grid_spec(width, height, start, goal, holes, wrap_around,
                        max_steps, std::move(map_id));
}

GridSpec load_map_file(const std::string& path, bool wrap_around, int max_steps) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open map file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  GridSpec spec = parse_map_text(buf.str(), wrap_around, max_steps, "");
  spec.map_id = "map:" + std::to_string(map_hash(spec));
  return spec;
}

std::string map_text(const GridSpec& spec) {
  std::string out;
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      int cell = spec.cell_at(r, c);
      char ch = 'F';
      if (cell == spec.start) ch = 'S';
      else if (cell == spec.goal) ch = 'G';
      else if (spec.is_hole(cell)) ch = 'H';
      out += ch;
    }
    out += '\n';
  }
  return out;
}

std::vector<int> goal_distances(const GridSpec& spec) {
  std::vector<int> dist(spec.n_cells(), -1);
  std::queue<int> frontier;
  dist[spec.goal] = 0;
  frontier.push(spec.goal);
  // BFS over reverse moves; moves are symmetric except for clamping, so
  // expand from each cell instead and relax neighbours reached by a step.
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop();
    int row = spec.row_of(cur), col = spec.col_of(cur);
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      int nr = row + dr[k], nc = col + dc[k];
      if (spec.wrap_around) {
        nr = (nr + spec.height) % spec.height;
        nc = (nc + spec.width) % spec.width;
      } else if (nr < 0 || nr >= spec.height || nc < 0 || nc >= spec.width) {
        continue;
      }
      int nxt = spec.cell_at(nr, nc);
      if (spec.is_hole(nxt) || nxt == spec.goal) continue;
      if (dist[nxt] < 0) {
        dist[nxt] = dist[cur] + 1;
        frontier.push(nxt);
      }
    }
  }
  return dist;
}

int shortest_path_length(const GridSpec& spec) {
  return goal_distances(spec)[spec.start];
}

int manhattan_start_goal(const GridSpec& spec) {
  int r0 = spec.row_of(spec.start), c0 = spec.col_of(spec.start);
  int r1 = spec.row_of(spec.goal), c1 = spec.col_of(spec.goal);
  int dr = std::abs(r0 - r1), dc = std::abs(c0 - c1);
  if (spec.wrap_around) {
    dr = std::min(dr, spec.height - dr);
    dc = std::min(dc, spec.width - dc);
  }
  return dr + dc;
}

std::uint64_t map_hash(const GridSpec& spec) {
  std::string blob = map_text(spec);
  blob += spec.wrap_around ? "|wrap|" : "|clamp|";
  blob += std::to_string(spec.max_steps);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : blob) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<double> grid_observation(const GridSpec& spec, GridState s) {
  double dx = spec.width > 1 ? spec.width - 1.0 : 1.0;
  double dy = spec.height > 1 ? spec.height - 1.0 : 1.0;
  return {spec.col_of(s.cell) / dx, spec.row_of(s.cell) / dy};
}

}  // namespace soda
