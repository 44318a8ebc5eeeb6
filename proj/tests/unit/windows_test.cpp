#include <doctest.h>

#include <random>
#include <set>

#include "advplan/domains.hpp"
#include "advplan/windows.hpp"
#include "support/fixtures.hpp"
#include "support/window_gen.hpp"

using namespace advplan;
using namespace advplan::testing;

namespace {

Predicate P(std::string name, std::vector<std::string> args) {
  return {std::move(name), std::move(args)};
}

std::vector<Predicate> sorted(std::vector<Predicate> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Trajectory of a plan given by action names.
Walk replay(const Task& task, const std::vector<std::string>& names) {
  Walk walk{{task.initial_state}, {}};
  for (auto& n : names) {
    ActionId a = action(task, n);
    walk.actions.push_back(a);
    walk.states.push_back(apply_action(task, walk.states.back(), task.operators[a]));
  }
  return walk;
}

Task three_airport_task() {
  return ground_task(parse_task(
      air_cargo_domain_pddl(),
      air_cargo_problem("c4 c5 - cargo p1 p2 - plane JFK PHX PHL - airport",
                        "(At c4 PHL) (At c5 PHL) (At p1 PHX) (At p2 PHL)",
                        "(At c5 PHX)")));
}

}  // namespace

TEST_SUITE("windows") {

TEST_CASE("grid window extraction") {
  // Walls right of and below the centre; the opening is to the left.
  Grid g = parse_maze("S....\n.....\n...#.\n..#..\n....G\n");
  GridWindow w = extract_grid_window(g, {2, 2}, 3, Cell{2, 1});
  CHECK(w.pattern() == ".../.X#/.#.");
  CHECK(w.approach == 1);  // arrived from the left
  CHECK_FALSE(w.wall(1, 1));

  Grid empty(6, 6, {0, 0}, {5, 5});
  GridWindow corner = extract_grid_window(empty, {0, 0});
  CHECK(std::count(corner.mask.begin(), corner.mask.end(), 1) == 5);
  GridWindow interior = extract_grid_window(empty, {3, 3});
  CHECK(std::count(interior.mask.begin(), interior.mask.end(), 1) == 0);
  CHECK_THROWS_AS(extract_grid_window(empty, {3, 3}, 4), Error);
}

TEST_CASE("a wall in the corner-pocket window forces a detour") {
  // A wall column with a single gap at the centre.
  Grid g = parse_maze("S.#..\n..#..\n.....\n..#..\n..#.G\n");
  auto before = shortest_path_length(g, g.start(), g.goal());
  REQUIRE(before);
  GridWindow w = extract_grid_window(g, {2, 2}, 3);
  CHECK(w.pattern() == ".#./.X./.#.");
  Grid blocked = g;
  blocked.set_wall({2, 2});
  CHECK_FALSE(shortest_path_length(blocked, g.start(), g.goal()));
}

TEST_CASE("rotations and grid equivalence") {
  GridWindow w = parse_grid_pattern("##./.X./...");
  w.approach = 3;
  GridWindow r = rotate(w);
  CHECK(r.pattern() == "..#/.X#/...");
  CHECK(r.approach == 1);  // down turns into left
  CHECK(rotate(w, 4) == w);
  auto witness = grid_windows_equivalent(r, w);
  REQUIRE(witness);
  CHECK(witness->quarter_turns == 1);
  CHECK(grid_windows_equivalent(w, w)->quarter_turns == 0);

  // A chiral pattern is not a rotation of its mirror image.
  GridWindow chiral = parse_grid_pattern("#../.X#/...");
  CHECK_FALSE(grid_windows_equivalent(chiral, reflect(chiral)));
  CHECK(grid_windows_equivalent(chiral, reflect(chiral), {true, false}));
}

TEST_CASE("grid canonical forms agree with the rotation oracle on every 3x3 mask") {
  std::vector<GridWindow> all;
  for (int bits = 0; bits < 256; ++bits) {
    GridWindow w;
    w.mask.assign(9, 0);
    int b = 0;
    for (int i = 0; i < 9; ++i) {
      if (i == 4) continue;
      w.mask[i] = (bits >> b++) & 1;
    }
    all.push_back(w);
  }
  std::vector<GridWindow> canon;
  std::set<std::string> classes;
  for (auto& a : all) {
    canon.push_back(canonical_grid_window(a));
    classes.insert(canon.back().pattern());
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      bool same = canon[i] == canon[j];
      if (same != grid_windows_equivalent(all[i], all[j]).has_value()) FAIL(i << " " << j);
    }
  }
  // Burnside over the rotation group: (256 + 4 + 16 + 4) / 4.
  CHECK(classes.size() == 70);
}

TEST_CASE("strips window from the optimal two-cargo plan") {
  Task task = two_cargo_task();
  Walk walk = replay(task, {"(LOAD c1 p1 SFO)", "(FLY p1 SFO JFK)", "(UNLOAD c1 p1 JFK)",
                            "(LOAD c2 p2 JFK)"});
  StripsWindow w = extract_strips_window(task, walk.states, walk.actions, 3, 4);
  CHECK(w.size() == 4);
  REQUIRE(w.actions.size() == 3);
  CHECK(w.actions.back() == P("UNLOAD", {"c1", "p1", "JFK"}));
  CHECK(w.states.front() == sorted({P("At", {"c1", "SFO"}), P("At", {"c2", "JFK"}),
                                    P("At", {"p1", "SFO"}), P("At", {"p2", "JFK"})}));
  CHECK(w.object_types.at("p2") == "plane");

  CHECK_THROWS_AS(extract_strips_window(task, walk.states, walk.actions, 2, 4), Error);
  CHECK_THROWS_AS(extract_strips_window(task, walk.states, walk.actions, 3, 1), Error);
}

TEST_CASE("fly, fly, unload window and its normalization") {
  Task task = three_airport_task();
  Walk walk = replay(task, {"(LOAD c5 p2 PHL)", "(FLY p2 PHL JFK)", "(FLY p2 JFK PHX)",
                            "(UNLOAD c5 p2 PHX)"});
  StripsWindow w = extract_strips_window(task, walk.states, walk.actions, 4, 4);
  REQUIRE(w.actions.size() == 3);
  CHECK(w.actions[0].name == "FLY");
  CHECK(w.actions[1].name == "FLY");
  CHECK(w.actions[2] == P("UNLOAD", {"c5", "p2", "PHX"}));

  StripsWindow norm = normalize_window(w);
  // p1 and c4 never move: their facts vanish, and so do the objects.
  for (auto& s : norm.states) {
    for (auto& p : s) {
      CHECK(p != P("At", {"p1", "PHX"}));
      CHECK(p != P("At", {"c4", "PHL"}));
    }
  }
  CHECK_FALSE(norm.object_types.count("p1"));
  CHECK_FALSE(norm.object_types.count("c4"));
  CHECK(normalize_window(norm) == norm);

  // The change makes the task fail: no other way to unload c5 at PHX.
  auto base = solve(task, SearchConfig::breadth_first());
  REQUIRE(base.solved());
  RemovedSet removed({action(task, "(UNLOAD c5 p2 PHX)"), action(task, "(UNLOAD c5 p1 PHX)")});
  CHECK_FALSE(solve(task, SearchConfig::breadth_first(), removed).solved());
}

TEST_CASE("normalizing identical states empties them") {
  Task task = two_cargo_task();
  std::vector<State> states(4, task.initial_state);
  ActionId noop = action(task, "(LOAD c1 p1 SFO)");
  std::vector<ActionId> actions(3, noop);
  StripsWindow w = normalize_window(extract_strips_window(task, states, actions, 3, 4));
  for (auto& s : w.states) CHECK(s.empty());
}

TEST_CASE("the documented bijection between two fly-fly-unload windows") {
  Task task = three_airport_task();
  Walk walk = replay(task, {"(FLY p1 PHX JFK)", "(LOAD c4 p2 PHL)", "(FLY p2 PHL PHX)"});
  StripsWindow w2 = normalize_window(
      extract_strips_window(task, walk.states, walk.actions, 3, 4));
  CHECK_FALSE(w2.object_types.count("c5"));
  ObjectMap f = {{"p1", "p3"}, {"JFK", "SFO"}, {"PHX", "LAS"},
                 {"p2", "p1"}, {"PHL", "PHX"}, {"c4", "c5"}};
  CHECK(w2.object_types.size() == f.size());
  StripsWindow w1 = rename_objects(w2, f);
  auto witness = strips_windows_equivalent(w2, w1);
  REQUIRE(witness);
  CHECK(*witness == f);
  CHECK(strips_window_key(canonical_strips_window(w1)) ==
        strips_window_key(canonical_strips_window(w2)));
}

TEST_CASE("equivalence rejects different schemas and type clashes") {
  Task task = two_cargo_task();
  Walk a = replay(task, {"(LOAD c1 p1 SFO)", "(FLY p1 SFO JFK)", "(UNLOAD c1 p1 JFK)"});
  Walk b = replay(task, {"(LOAD c1 p1 SFO)", "(FLY p1 SFO JFK)", "(FLY p1 JFK SFO)"});
  auto wa = normalize_window(extract_strips_window(task, a.states, a.actions, 3, 4));
  auto wb = normalize_window(extract_strips_window(task, b.states, b.actions, 3, 4));
  CHECK_FALSE(strips_windows_equivalent(wa, wb));
  StripsWindow retyped = wa;
  retyped.object_types["c1"] = "plane";
  CHECK_FALSE(strips_windows_equivalent(wa, retyped));
}

TEST_CASE("equivalence properties over generated windows") {
  auto windows = random_strips_windows(1000, 4, 7);
  std::mt19937_64 rng(11);
  int checked = 0;
  for (auto& raw : windows) {
    for (const StripsWindow& w : {raw, normalize_window(raw)}) {
      // Reflexivity with the identity witness.
      auto self = strips_windows_equivalent(w, w);
      REQUIRE(self);
      for (auto& [o, img] : *self) CHECK(o == img);
      // Name independence and symmetry.
      ObjectMap f = random_renaming(w, rng);
      StripsWindow renamed = rename_objects(w, f);
      auto fw = strips_windows_equivalent(w, renamed);
      auto bw = strips_windows_equivalent(renamed, w);
      REQUIRE(fw);
      REQUIRE(bw);
      CHECK(rename_objects(w, *fw) == renamed);
      CHECK(rename_objects(renamed, *bw) == w);
      // Transitivity via a second renaming and the composed witness.
      ObjectMap g = random_renaming(renamed, rng);
      StripsWindow twice = rename_objects(renamed, g);
      auto gw = strips_windows_equivalent(renamed, twice);
      REQUIRE(gw);
      ObjectMap composed;
      for (auto& [o, img] : *fw) composed[o] = gw->at(img);
      CHECK(rename_objects(w, composed) == twice);
      CHECK(strips_windows_equivalent(w, twice));
      ++checked;
    }
    // Normalization is idempotent.
    CHECK(normalize_window(normalize_window(raw)) == normalize_window(raw));
    // No atom common to all normalized states.
    auto norm = normalize_window(raw);
    for (auto& p : norm.states.front()) {
      bool everywhere = true;
      for (auto& s : norm.states) everywhere &= std::binary_search(s.begin(), s.end(), p);
      CHECK_FALSE(everywhere);
    }
  }
  CHECK(checked == 2000);
}

TEST_CASE("canonical keys agree with the bijection oracle on normalized windows") {
  auto windows = random_strips_windows(300, 4, 99);
  std::vector<StripsWindow> norm;
  for (auto& w : windows) norm.push_back(normalize_window(w));
  std::vector<std::string> keys;
  for (auto& w : norm) keys.push_back(strips_window_key(canonical_strips_window(w)));
  int equal_pairs = 0;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    for (std::size_t j = i; j < norm.size(); ++j) {
      bool oracle = strips_windows_equivalent(norm[i], norm[j]).has_value();
      CHECK(oracle == (keys[i] == keys[j]));
      equal_pairs += oracle && i != j;
    }
  }
  CHECK(equal_pairs > 0);
}

TEST_CASE("thresholding") {
  WindowTable table(WindowFlavor::kGrid, 3);
  GridWindow w1 = parse_grid_pattern("#.#/.X./...");
  GridWindow w2 = parse_grid_pattern("###/.X./...");
  table.add(w1, 12);
  table.add(w2, 3);
  CHECK(table.thresholded(0).size() == 2);
  CHECK(table.thresholded(0).entries()[0].count == 12);
  CHECK(table.thresholded(13).empty());
  auto kept = table.thresholded(10);
  REQUIRE(kept.size() == 1);
  CHECK(kept.entries()[0].count == 12);
  CHECK(kept.find(rotate(w1, 2)) != nullptr);
  CHECK(kept.find(w2) == nullptr);
}

TEST_CASE("grid table build: canonicity, conservation, round trip") {
  GridTableSpec spec;
  spec.count = 60;
  spec.maze = {15, 15, 0.25, 3};
  TableStats stats;
  WindowTable table = build_grid_table(spec, &stats);
  CHECK(stats.instances == 60);
  CHECK(table.total_count() == std::int64_t(stats.adversarial - stats.too_short));
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      CHECK_FALSE(grid_windows_equivalent(*table.entries()[i].grid, *table.entries()[j].grid));
    }
  }
  std::string text = format_table(table);
  WindowTable back = parse_table(text);
  CHECK(back == table);
  CHECK(format_table(back) == text);

  spec.count = 0;
  CHECK(build_grid_table(spec).empty());
  CHECK(build_grid_table({60, {15, 15, 0.25, 3}, 3, GridHeuristic::kEuclidean, 1000}).empty());
}

TEST_CASE("strips table build: canonicity, conservation, round trip") {
  StripsTableSpec spec;
  spec.count = 40;
  TaskGenerator gen = [](std::size_t i) {
    return generate_air_cargo({1 + int(i % 2), 1 + int(i % 2), 3, 500 + i});
  };
  TableStats stats;
  WindowTable table = build_strips_table(spec, gen, &stats);
  CHECK(stats.instances == 40);
  CHECK(stats.adversarial > 0);
  CHECK(table.total_count() == std::int64_t(stats.adversarial - stats.too_short));
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      CHECK_FALSE(strips_windows_equivalent(*table.entries()[i].strips,
                                            *table.entries()[j].strips));
    }
  }
  std::string text = format_table(table);
  WindowTable back = parse_table(text);
  CHECK(back == table);
  CHECK(format_table(back) == text);
}

TEST_CASE("malformed tables are rejected") {
  CHECK_THROWS_AS(parse_table("not a table\n"), ParseError);
  CHECK_THROWS_AS(parse_table("advplan-window-table 1\nflavor grid\nwindow-size 3\n"
                              "reflections 0\nmatch-approach 0\nentries 1\n"
                              "grid 2 ##/.X/.. none\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_table("advplan-window-table 1\nflavor hex\n"), ParseError);
}

}  // TEST_SUITE
