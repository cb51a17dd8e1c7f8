#include <doctest.h>

#include <set>

#include "soda/grid_env.hpp"
#include "soda/rng.hpp"

using namespace soda;

namespace {

GridSpec wrap3x3(int start = 0, int goal = 8) {
  return make_grid_spec(3, 3, start, goal, {}, /*wrap=*/true, /*max_steps=*/100, "wrap3");
}

}  // namespace

TEST_CASE("wrap grid: moving left from the first column wraps to the last") {
  GridSpec spec = wrap3x3();
  Step<GridState> out = grid_step(spec, GridState{0}, GridAction::Left);
  CHECK(out.next.cell == 2);
  CHECK(out.reward == 0.0);
}

TEST_CASE("clamped grid: moving up from the top row stays in place") {
  GridSpec spec = make_grid_spec(3, 3, 0, 8, {}, false, 100, "g");
  Step<GridState> out = grid_step(spec, GridState{0}, GridAction::Up);
  CHECK(out.next.cell == 0);
  CHECK(out.reward == 0.0);
  CHECK_FALSE(out.terminal);
}

TEST_CASE("entering the goal pays reward 1 and terminates") {
  GridSpec spec = make_grid_spec(3, 3, 0, 8, {}, false, 100, "g");
  Step<GridState> out = grid_step(spec, GridState{7}, GridAction::Right);
  CHECK(out.next.cell == 8);
  CHECK(out.reward == 1.0);
  CHECK(out.terminal);
}

TEST_CASE("entering a hole terminates with reward 0") {
  GridSpec spec = make_grid_spec(3, 3, 0, 8, {4}, false, 100, "g");
  Step<GridState> out = grid_step(spec, GridState{1}, GridAction::Down);
  CHECK(out.next.cell == 4);
  CHECK(out.reward == 0.0);
  CHECK(out.terminal);
}

TEST_CASE("stepping from a terminal state is a usage error") {
  GridSpec spec = make_grid_spec(3, 3, 0, 8, {4}, false, 100, "g");
  CHECK_THROWS_AS(grid_step(spec, GridState{8}, GridAction::Up), std::invalid_argument);
  CHECK_THROWS_AS(grid_step(spec, GridState{4}, GridAction::Up), std::invalid_argument);
}

TEST_CASE("step budget marks truncation, except when the goal is reached") {
  GridSpec spec = make_grid_spec(3, 3, 0, 8, {}, false, 4, "g");
  Step<GridState> out = grid_step(spec, GridState{1}, GridAction::Left, 3);
  CHECK(out.truncated);
  CHECK(out.reward == 0.0);
  Step<GridState> win = grid_step(spec, GridState{7}, GridAction::Right, 3);
  CHECK_FALSE(win.truncated);
  CHECK(win.reward == 1.0);
}

TEST_CASE("determinism: identical inputs yield identical outcomes") {
  GridSpec spec = make_preset(GridTier::Easy);
  for (GridState s : enumerate_states(spec)) {
    if (spec.is_terminal_cell(s.cell)) continue;
    for (int a = 0; a < kGridActionCount; ++a) {
      Step<GridState> x = grid_step(spec, s, static_cast<GridAction>(a), 3);
      Step<GridState> y = grid_step(spec, s, static_cast<GridAction>(a), 3);
      CHECK(x.next.cell == y.next.cell);
      CHECK(x.reward == y.reward);
      CHECK(x.terminal == y.terminal);
      CHECK(x.truncated == y.truncated);
    }
  }
}

TEST_CASE("episode reward is sparse: total over any episode is 0 or 1") {
  GridSpec spec = make_preset(GridTier::Easy);
  Rng rng(42);
  for (int episode = 0; episode < 200; ++episode) {
    GridState s{spec.start};
    double total = 0.0;
    for (int step = 0; step < spec.max_steps; ++step) {
      auto out = grid_step(spec, s, static_cast<GridAction>(rng.uniform_int(4)), step);
      total += out.reward;
      s = out.next;
      if (out.terminal) break;
    }
    CHECK((total == 0.0 || total == 1.0));
  }
}

TEST_CASE("wrap consistency: repeating an action width/height times returns home") {
  GridSpec spec = wrap3x3(0, 8);
  GridState s{1};
  for (int i = 0; i < spec.width; ++i) s = grid_step(spec, s, GridAction::Right).next;
  CHECK(s.cell == 1);
  s = GridState{1};
  for (int i = 0; i < spec.height; ++i) s = grid_step(spec, s, GridAction::Down).next;
  CHECK(s.cell == 1);
}

TEST_CASE("enumerate_states covers the grid in row-major order exactly once") {
  GridSpec g3 = make_grid_spec(3, 3, 0, 8, {}, false, 100, "g");
  auto states = enumerate_states(g3);
  REQUIRE(states.size() == 9);
  for (int i = 0; i < 9; ++i) CHECK(states[i].cell == i);

  GridSpec g2 = make_grid_spec(2, 2, 0, 3, {}, false, 100, "g");
  CHECK(enumerate_states(g2).size() == 4);

  GridSpec g1 = make_grid_spec(1, 2, 0, 1, {}, false, 100, "g");
  CHECK(enumerate_states(g1).size() == 2);
}

TEST_CASE("presets have the frozen sizes and hole counts and are solvable") {
  struct Expect {
    GridTier tier;
    int side;
    int holes;
  };
  for (Expect e : {Expect{GridTier::Easy, 5, 3}, Expect{GridTier::Medium, 9, 12},
                   Expect{GridTier::Hard, 13, 30}}) {
    GridSpec spec = make_preset(e.tier);
    CHECK(spec.width == e.side);
    CHECK(spec.height == e.side);
    CHECK(static_cast<int>(spec.hole_cells().size()) == e.holes);
    int dist = shortest_path_length(spec);
    CHECK(dist > 0);            // BFS reaches the goal avoiding holes
    CHECK(dist <= spec.max_steps);
  }
}

TEST_CASE("presets are frozen: identical layout on every call") {
  CHECK(map_text(make_preset(GridTier::Hard)) == map_text(make_preset(GridTier::Hard)));
  CHECK(map_hash(make_preset(GridTier::Medium)) == map_hash(make_preset(GridTier::Medium)));
}

TEST_CASE("map text round-trips through the parser") {
  GridSpec spec = make_preset(GridTier::Medium);
  GridSpec again = parse_map_text(map_text(spec), spec.wrap_around, spec.max_steps, "m");
  CHECK(map_text(again) == map_text(spec));
  CHECK(again.start == spec.start);
  CHECK(again.goal == spec.goal);
}

TEST_CASE("map parser rejects invalid layouts") {
  CHECK_THROWS_AS(parse_map_text("SG\nH", false, 100, "m"), std::invalid_argument);   // ragged
  CHECK_THROWS_AS(parse_map_text("SF\nFF", false, 100, "m"), std::invalid_argument);  // no goal
  CHECK_THROWS_AS(parse_map_text("SX\nFG", false, 100, "m"), std::invalid_argument);  // bad char
  CHECK_THROWS_AS(parse_map_text("SS\nFG", false, 100, "m"), std::invalid_argument);  // two starts
}

TEST_CASE("spec invariants are enforced") {
  CHECK_THROWS_AS(make_grid_spec(3, 3, 0, 0, {}, false, 100, "g"),
                  std::invalid_argument);  // start == goal
  CHECK_THROWS_AS(make_grid_spec(3, 3, 0, 8, {0}, false, 100, "g"),
                  std::invalid_argument);  // start is a hole
  CHECK_THROWS_AS(make_grid_spec(3, 3, 0, 8, {9}, false, 100, "g"),
                  std::invalid_argument);  // hole out of range
  CHECK_THROWS_AS(make_grid_spec(3, 3, 0, 8, {}, false, 3, "g"),
                  std::invalid_argument);  // budget below Manhattan distance
}

TEST_CASE("goal distances match hand-computed values on a small map") {
  // S F
  // H G
  GridSpec spec = parse_map_text("SF\nHG", false, 100, "m");
  auto dist = goal_distances(spec);
  CHECK(dist[spec.goal] == 0);
  CHECK(dist[1] == 1);
  CHECK(dist[0] == 2);
  CHECK(dist[2] == -1);  // hole: no exit
}

TEST_CASE("grid observations are normalized coordinates") {
  GridSpec spec = make_grid_spec(5, 5, 0, 24, {}, false, 100, "g");
  auto obs = grid_observation(spec, GridState{24});
  CHECK(obs[0] == doctest::Approx(1.0));
  CHECK(obs[1] == doctest::Approx(1.0));
  auto mid = grid_observation(spec, GridState{12});
  CHECK(mid[0] == doctest::Approx(0.5));
  CHECK(mid[1] == doctest::Approx(0.5));
}
