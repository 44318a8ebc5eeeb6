#include <doctest.h>

#include "advplan/planner.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_tasks.hpp"

using namespace advplan;
using namespace advplan::testing;

TEST_SUITE("planner") {

TEST_CASE("breadth-first search finds the six-step swap plan") {
  Task task = two_cargo_task();
  auto result = solve(task, SearchConfig::breadth_first());
  REQUIRE(result.solved());
  CHECK(result.plan.total_cost == Cost(6));
  CHECK(validate_plan(task, result.plan).valid);
  // No five-action plan exists.
  CHECK(shortest_length_reference(task, 5) == -1);
}

TEST_CASE("goal already satisfied gives the empty plan") {
  Task trivial = ground_task(parse_task(
      air_cargo_domain(),
      air_cargo_problem("p1 - plane A - airport", "(At p1 A)", "(At p1 A)")));
  for (auto config : {SearchConfig::breadth_first(), SearchConfig::uniform_cost(),
                      SearchConfig::greedy_additive()}) {
    auto result = solve(trivial, config);
    REQUIRE(result.solved());
    CHECK(result.plan.actions.empty());
    CHECK(result.plan.total_cost == Cost(0));
  }
}

TEST_CASE("removing both unloads of c1 at JFK makes the task unsolvable") {
  Task task = two_cargo_task();
  RemovedSet removed({action(task, "(UNLOAD c1 p1 JFK)"),
                      action(task, "(UNLOAD c1 p2 JFK)")});
  std::set<ActionId> removed_ref(removed.ids().begin(), removed.ids().end());
  CHECK(optimal_cost_reference(task, removed_ref).is_infinite());
  for (auto config : {SearchConfig::breadth_first(), SearchConfig::uniform_cost(),
                      SearchConfig::greedy_additive()}) {
    auto result = solve(task, config, removed);
    CHECK(result.outcome == SearchOutcome::kUnsolvable);
    CHECK(result.cost().is_infinite());
  }
}

TEST_CASE("budget exhaustion is distinct from unsolvability") {
  Task task = two_cargo_task();
  SearchConfig config = SearchConfig::breadth_first();
  config.node_budget = 3;
  auto result = solve(task, config);
  CHECK(result.outcome == SearchOutcome::kBudgetExhausted);
  CHECK(result.expanded == 3);
  config.node_budget = 0;
  CHECK_THROWS_AS(solve(task, config), Error);
}

TEST_CASE("goal-count heuristic") {
  Task task = two_cargo_task();
  CHECK(h_goal_count(task.initial_state, task.goal_atoms) == 2);
  State goal_state(task.goal_atoms);
  CHECK(h_goal_count(goal_state, task.goal_atoms) == 0);
  State half({task.goal_atoms[0]});
  CHECK(h_goal_count(half, task.goal_atoms) == 1);
}

TEST_CASE("goal-count is zero exactly on goal states") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Task t = random_task(seed);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 20; ++i) {
      std::vector<AtomId> atoms;
      for (AtomId a = 0; a < t.atoms.size(); ++a) {
        if (rng() % 2) atoms.push_back(a);
      }
      State s(atoms);
      CHECK((h_goal_count(s, t.goal_atoms) == 0) == t.is_goal(s));
    }
  }
}

TEST_CASE("additive heuristic values") {
  Task task = two_cargo_task();
  CHECK(additive_reference(task, task.initial_state) == Cost(6));
  CHECK(h_additive(task, task.initial_state) == Cost(6));
  CHECK(h_additive(task, State(task.goal_atoms)) == Cost(0));

  RemovedSet no_fly;
  std::set<ActionId> no_fly_ref;
  for (ActionId id = 0; id < task.operators.size(); ++id) {
    if (task.operators[id].schema == "FLY") {
      no_fly.insert(id);
      no_fly_ref.insert(id);
    }
  }
  CHECK(additive_reference(task, task.initial_state, no_fly_ref).is_infinite());
  CHECK(h_additive(task, task.initial_state, no_fly).is_infinite());
}

TEST_CASE("additive heuristic agrees with the fixpoint oracle") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Task t = random_task(seed, {7, 12, 4});
    std::mt19937_64 rng(seed * 7 + 1);
    for (int i = 0; i < 10; ++i) {
      std::vector<AtomId> atoms;
      for (AtomId a = 0; a < t.atoms.size(); ++a) {
        if (rng() % 3 == 0) atoms.push_back(a);
      }
      State s(atoms);
      CHECK(h_additive(t, s) == additive_reference(t, s));
    }
  }
}

TEST_CASE("optimal configurations agree with exhaustive search") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Task unit = random_task(seed, {7, 12, 1});
    Cost expected = optimal_cost_reference(unit);
    CHECK(solve(unit, SearchConfig::breadth_first()).cost() == expected);
    CHECK(solve(unit, SearchConfig::uniform_cost()).cost() == expected);

    Task weighted = random_task(seed + 1000, {7, 12, 5});
    CHECK(solve(weighted, SearchConfig::uniform_cost()).cost() ==
          optimal_cost_reference(weighted));
  }
}

TEST_CASE("suboptimal configurations return valid plans") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    Task t = random_task(seed, {7, 12, 3});
    bool solvable = optimal_cost_reference(t).is_finite();
    for (auto h : {HeuristicKind::kAdditive, HeuristicKind::kGoalCount}) {
      for (auto alg : {SearchAlgorithm::kGreedyBestFirst, SearchAlgorithm::kAStar}) {
        auto result = solve(t, {alg, h});
        CHECK(result.solved() == solvable);
        if (result.solved()) CHECK(validate_plan(t, result.plan).valid);
      }
    }
  }
}

TEST_CASE("removing more actions never lowers the optimal cost") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Task t = random_task(seed, {7, 14, 3});
    std::mt19937_64 rng(seed);
    RemovedSet small;
    for (int i = 0; i < 2; ++i) small.insert(rng() % t.operators.size());
    RemovedSet large = small;
    for (int i = 0; i < 2; ++i) large.insert(rng() % t.operators.size());
    auto a = solve(t, SearchConfig::uniform_cost(), small).cost();
    auto b = solve(t, SearchConfig::uniform_cost(), large).cost();
    CHECK(b >= a);
  }
}

TEST_CASE("search is deterministic, and seeded tie-breaking is reproducible") {
  Task task = two_cargo_task();
  for (auto config : {SearchConfig::greedy_additive(), SearchConfig::uniform_cost()}) {
    auto a = solve(task, config);
    auto b = solve(task, config);
    CHECK(a.plan.actions == b.plan.actions);
    CHECK(a.expanded == b.expanded);
    config.random_tie_break = true;
    config.tie_break_seed = 42;
    auto c = solve(task, config);
    auto d = solve(task, config);
    CHECK(c.plan.actions == d.plan.actions);
    CHECK(validate_plan(task, c.plan).valid);
  }
}

TEST_CASE("search engine drops nodes reached through a withdrawn action") {
  Task task = single_cargo_task();
  SearchEngine engine(task, SearchConfig::breadth_first());
  auto root = engine.pop();
  REQUIRE(root);
  engine.expand(*root);
  ActionId load = action(task, "(LOAD c1 p1 SFO)");
  engine.remove_action(load);
  while (auto id = engine.pop()) {
    CHECK(engine.node(*id).action != load);
    engine.expand(*id);
  }
  CHECK(engine.removed().contains(load));
}

}  // TEST_SUITE
