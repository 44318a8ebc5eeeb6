#include <doctest.h>

#include <random>

#include "advplan/attacks.hpp"
#include "advplan/reduction.hpp"
#include "support/graph_oracles.hpp"

using namespace advplan;
using namespace advplan::testing;

namespace {

// s=0, a=1, t=2: s->t, s->a, a->t, all cost 1.
ArcGraph triangle() { return ArcGraph{3, 0, 2, {{0, 2, 1}, {0, 1, 1}, {1, 2, 1}}}; }

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("arc-list format") {
  ArcGraph g = parse_arc_list("# triangle\n3 0 2\n0 2 1\n\n0 1 1  # detour\n1 2 1\n");
  CHECK(g == triangle());
  CHECK(parse_arc_list(format_arc_list(g)) == g);
  CHECK(format_arc_list(g) == "3 0 2\n0 2 1\n0 1 1\n1 2 1\n");
  CHECK_THROWS_AS(parse_arc_list(""), ParseError);
  CHECK_THROWS_AS(parse_arc_list("3 0 2\n0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_arc_list("3 0 2\n0 x 1\n"), ParseError);
  for (auto bad : {"3 0 0\n", "3 0 2\n1 1 4\n", "3 0 2\n0 5 1\n", "3 0 2\n0 1 -1\n"}) {
    try {
      parse_arc_list(bad);
      FAIL("accepted " << bad);
    } catch (const Error& e) {
      CHECK(e.category() == ErrorCategory::kInvalidInput);
    }
  }
}

TEST_CASE("reduced tasks on the documented examples") {
  Task t = mvap_to_strips(triangle());
  CHECK(t.operators.size() == 3);
  auto r = solve(t, SearchConfig::uniform_cost());
  CHECK(r.cost() == Cost(1));
  CHECK(r.cost() == shortest_path_cost(triangle()));

  ArcGraph single{2, 0, 1, {{0, 1, 7}}};
  Task s = mvap_to_strips(single);
  auto rs = solve(s, SearchConfig::uniform_cost());
  REQUIRE(rs.plan.actions.size() == 1);
  CHECK(s.operators[rs.plan.actions[0]].name() == "(O_0_1)");
  CHECK(rs.cost() == Cost(7));

  ArcGraph cut{3, 0, 2, {{0, 1, 1}, {2, 1, 1}}};
  CHECK_FALSE(solve(mvap_to_strips(cut), SearchConfig::uniform_cost()).solved());
  CHECK(shortest_path_cost(cut).is_infinite());

  ArcGraph parallel{2, 0, 1, {{0, 1, 5}, {0, 1, 2}}};
  Task p = mvap_to_strips(parallel);
  auto ids = arc_actions(p, parallel);
  CHECK(p.operators[ids[1]].name() == "(O_0_1_2)");
  CHECK(solve(p, SearchConfig::uniform_cost()).cost() == Cost(2));
}

TEST_CASE("undirected edges become arc pairs") {
  ArcGraph g = from_undirected(3, 2, 0, {{0, 1, 2}, {1, 2, 3}});
  CHECK(g.arcs.size() == 4);
  CHECK(shortest_path_cost(g) == Cost(5));
}

TEST_CASE("D-MVAP on the triangle") {
  auto yes = solve_dmvap_exhaustive(triangle(), 1, Cost(2));
  CHECK(yes.yes);
  CHECK(yes.witness == std::vector<std::size_t>{0});
  auto no = solve_dmvap_exhaustive(triangle(), 1, Cost(3));
  CHECK_FALSE(no.yes);
  CHECK(no.best_cost == Cost(2));
  auto zero = solve_dmvap_exhaustive(triangle(), 0, Cost(1));
  CHECK(zero.yes);
  CHECK(zero.witness.empty());
  CHECK(solve_dmvap_exhaustive(triangle(), 2, Cost(1000)).best_cost.is_infinite());
  CHECK_THROWS_AS(solve_dmvap_exhaustive(random_digraph(3, 12, 0.9), 4, Cost(1), 100), Error);
}

TEST_CASE("reduction faithfulness on random digraphs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ArcGraph g = random_digraph(seed);
    CAPTURE(seed);
    Cost expected = path_cost_reference(g);
    CHECK(shortest_path_cost(g) == expected);
    Task t = mvap_to_strips(g);
    CHECK(t.operators.size() == g.arcs.size());
    CHECK(solve(t, SearchConfig::uniform_cost()).cost() == expected);
  }
}

TEST_CASE("interdiction equivalence for random removal sets") {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ArcGraph g = random_digraph(seed + 1000, 9);
    Task t = mvap_to_strips(g);
    auto ids = arc_actions(t, g);
    std::vector<bool> removed(g.arcs.size());
    std::vector<ActionId> withheld;
    for (std::size_t i = 0; i < removed.size(); ++i) {
      if (rng() % 3 == 0) {
        removed[i] = true;
        withheld.push_back(ids[i]);
      }
    }
    CAPTURE(seed);
    CHECK(solve(t, SearchConfig::uniform_cost(), RemovedSet(withheld)).cost() ==
          path_cost_reference(g, removed));
  }
}

TEST_CASE("D-ADVCP by brute force agrees with exhaustive D-MVAP") {
  int yes = 0, no = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    ArcGraph g = random_digraph(seed + 500, 8, 0.3);
    Cost base = shortest_path_cost(g);
    if (base.is_infinite()) continue;
    Task t = mvap_to_strips(g);
    for (int k = 0; k <= 2; ++k) {
      auto attack = brute_force_attack(t, SearchConfig::uniform_cost(), k);
      for (std::int64_t h = base.value(); h <= base.value() + 6; ++h) {
        bool graph = solve_dmvap_exhaustive(g, k, Cost(h)).yes;
        CAPTURE(seed);
        CAPTURE(k);
        CHECK(graph == (attack.attacked_cost >= Cost(h)));
        (graph ? yes : no)++;
      }
    }
  }
  CHECK(yes > 0);
  CHECK(no > 0);
}

}  // TEST_SUITE
