// Acceptance run: one PASS/FAIL line per criterion, 1 through 8.
// Exit status is the number of failed criteria (0 when all pass).
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "advplan/attacks.hpp"
#include "advplan/harness.hpp"
#include "advplan/reduction.hpp"
#include "advplan/util.hpp"
#include "support/graph_oracles.hpp"
#include "support/grid_oracles.hpp"
#include "support/oracles.hpp"
#include "support/random_tasks.hpp"
#include "support/window_gen.hpp"

using namespace advplan;
using namespace advplan::testing;

namespace {

int failures = 0;

void verdict(int n, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  failures += !ok;
}

std::string pct(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f%%", 100 * x);
  return b;
}

std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

bool in(double x, double lo, double hi) { return x >= lo && x <= hi; }

// Tables built along the way, checked again under criterion 7.
std::vector<WindowTable> built;

bool canonical(const WindowTable& t) {
  const auto& e = t.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      bool same = t.flavor() == WindowFlavor::kGrid
                      ? grid_windows_equivalent(*e[i].grid, *e[j].grid, t.grid_options()).has_value()
                      : strips_windows_equivalent(*e[i].strips, *e[j].strips).has_value();
      if (same) return false;
    }
  }
  return true;
}

ExperimentConfig maze_corpus() {
  ExperimentConfig c;  // 200 mazes, 15x15, wall frequency 0.25, seeds from 42
  c.budgets = {1, 2};
  return c;
}

// --- 1 and 2 -------------------------------------------------------------------------

double informed_k1 = -1;

void online_rates() {
  ExperimentConfig c = maze_corpus();
  c.threats = {"online-informed"};
  Stopwatch clock;
  auto result = run_experiment(c);
  double seconds = clock.seconds();
  const AggregateRow* k1 = result.report.find("online-informed", 1);
  const AggregateRow* k2 = result.report.find("online-informed", 2);
  informed_k1 = k1->success_rate;
  bool ok = in(k1->success_rate, 0.52, 0.82) && in(k2->success_rate, 0.68, 0.95) &&
            in(k1->mean_increase, 1.0, 4.0) && seconds < 300 && k1->instances == 200;
  verdict(1, ok,
          "k=1 " + pct(k1->success_rate) + " [52,82], k=2 " + pct(k2->success_rate) +
              " [68,95], mean increase k=1 " + num(k1->mean_increase) + " [1,4], unsolvable k=1 " +
              pct(k1->unsolvable_rate) + ", k=2 " + pct(k2->unsolvable_rate) + ", " +
              num(seconds) + " s");
  built.push_back(build_table(c, c.table_for("online-informed")));

  c.threats = {"online-black-box"};
  c.budgets = {1};
  clock = Stopwatch();
  auto bb = run_experiment(c);
  seconds = clock.seconds();
  double rate = bb.report.find("online-black-box", 1)->success_rate;
  verdict(2, std::abs(rate - informed_k1) <= 0.15 && seconds < 300,
          "black-box k=1 " + pct(rate) + " vs informed " + pct(informed_k1) + " (gap " +
              num(100 * std::abs(rate - informed_k1)) + " points, limit 15), " + num(seconds) +
              " s");
  built.push_back(build_table(c, c.table_for("online-black-box")));
  // Reported, not scored: the published sizes (231 and 45, +-40%).
  std::size_t t0 = built[built.size() - 2].size(), t10 = built.back().size();
  std::printf("note: maze tables hold %zu (threshold 0) and %zu (threshold 10) windows; "
              "published 231 and 45, band [139,323] and [27,63]: %s\n",
              t0, t10, in(t0, 139, 323) && in(t10, 27, 63) ? "inside" : "outside");
}

// --- 3 -------------------------------------------------------------------------------

void dominance() {
  ExperimentConfig c = maze_corpus();
  WindowTable informed = build_table(c, c.table_for("online-informed"));
  WindowTable blackbox = build_table(c, c.table_for("online-black-box"));
  ExperimentConfig s;
  s.flavor = "strips";
  WindowTable strips_table = build_table(s, s.table_for("offline-black-box"));
  built.push_back(strips_table);

  std::size_t comparisons = 0, violations = 0, instances = 0, successes = 0;
  std::string first;
  auto check = [&](Cost oracle, Cost heuristic, const std::string& what) {
    ++comparisons;
    if (heuristic > oracle) {
      if (!violations++) first = what;
    }
  };
  // 50 mazes between 5x5 and 9x9.
  for (std::uint64_t i = 0; i < 50; ++i) {
    int side = 5 + 2 * int(i % 3) + int(i % 2);
    Grid g = generate_maze({side, side, 0.25, derive_seed(7000, i), 100});
    ++instances;
    for (int k = 1; k <= 2; ++k) {
      Cost oracle = online_oracle_attack(g, GridHeuristic::kEuclidean, k).attacked_cost;
      for (Knowledge kn : {Knowledge::kInformed, Knowledge::kAgentHeuristic, Knowledge::kBlackBox}) {
        ThreatModel t{AttackMode::kOnline, kn, k, ""};
        const WindowTable& table = kn == Knowledge::kBlackBox ? blackbox : informed;
        auto r = online_attack(g, table, t).report;
        successes += r.success();
        check(oracle, r.attacked_cost, "maze " + std::to_string(i) + " k=" + std::to_string(k));
      }
    }
  }
  // 50 STRIPS tasks with at most 5000 reachable states, optimal (BFS) agent.
  std::size_t largest = 0;
  for (std::uint64_t i = 0; instances < 100; ++i) {
    std::uint64_t seed = derive_seed(8000, i);
    Task task = i % 2 ? generate_blocks({4 + int(i % 4 == 3), seed})
                      : generate_air_cargo({2, 2, 3 + int(i % 4 == 2), seed});
    std::size_t reachable = 0;
    if (optimal_cost_reference(task, {}, &reachable).is_infinite() || reachable > 5000) continue;
    largest = std::max(largest, reachable);
    ++instances;
    for (int k = 1; k <= 2; ++k) {
      Cost oracle = brute_force_attack(task, SearchConfig::breadth_first(), k).attacked_cost;
      for (Knowledge kn : {Knowledge::kAgentHeuristic, Knowledge::kBlackBox}) {
        ThreatModel t{AttackMode::kOffline, kn, k, ""};
        auto r = offline_attack(task, strips_table, t);
        successes += r.success();
        check(oracle, r.attacked_cost, "task " + std::to_string(i) + " k=" + std::to_string(k));
      }
    }
  }
  verdict(3, violations == 0 && instances == 100,
          std::to_string(instances) + " instances, " + std::to_string(comparisons) +
              " comparisons, " + std::to_string(violations) + " where the heuristic beat the oracle" +
              (violations ? " (first: " + first + ")" : "") + "; " + std::to_string(successes) +
              " heuristic successes; largest STRIPS space " + std::to_string(largest) + " states");
}

// --- 4 -------------------------------------------------------------------------------

void monotonicity() {
  std::size_t violations = 0, strict = 0, pairs = 0;
  std::mt19937_64 rng(4444);
  for (std::uint64_t seed = 0; pairs < 500; ++seed) {
    // Alternate small propositional tasks (with costs) and air-cargo tasks.
    Task t = seed % 2 ? random_task(seed, {8, 16, 4})
                      : generate_air_cargo({1 + int(seed % 3 == 0), 2, 3, seed});
    std::vector<ActionId> r;
    std::vector<ActionId> rp;
    for (ActionId a = 0; a < t.operators.size(); ++a) {
      bool small = rng() % 8 == 0;
      if (small) r.push_back(a);
      if (small || rng() % 6 == 0) rp.push_back(a);
    }
    RemovedSet R(r), Rp(rp);
    if (!Rp.includes(R)) continue;
    ++pairs;
    Cost a = solve(t, SearchConfig::uniform_cost(), R).cost();
    Cost b = solve(t, SearchConfig::uniform_cost(), Rp).cost();
    violations += b < a;
    strict += b > a;
  }
  verdict(4, violations == 0,
          std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations, " +
              std::to_string(strict) + " strict increases");
}

// --- 5 -------------------------------------------------------------------------------

void dstar() {
  Stopwatch clock;
  std::size_t trajectories = 0, replans = 0, violations = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Grid world = generate_maze({15, 15, 0.25, derive_seed(5000, seed), 100});
    GridHeuristic h = seed % 2 ? GridHeuristic::kEuclidean : GridHeuristic::kManhattan;
    DStarLite agent(world, world.start(), h);
    std::mt19937_64 rng(seed);
    ++trajectories;
    for (int step = 0; step < 400 && agent.position() != world.goal(); ++step) {
      if (rng() % 3 == 0) {
        auto ahead = agent.next_move();
        Cell target = rng() % 2 && ahead ? *ahead : Cell{int(rng() % 15), int(rng() % 15)};
        if (target != agent.position() && target != world.goal() && target != world.start() &&
            world.is_free(target)) {
          world.set_wall(target);
          agent.notify_wall(target);
        }
      }
      auto cost = agent.path_cost();
      ++replans;
      if (cost != astar_path_length(world, agent.position(), world.goal(), h)) ++violations;
      if (!cost) break;
      agent.move_to(*agent.next_move());
    }
  }
  double seconds = clock.seconds();
  verdict(5, violations == 0 && trajectories >= 500 && seconds < 120,
          std::to_string(trajectories) + " trajectories, " + std::to_string(replans) +
              " replans, " + std::to_string(violations) + " mismatches with fresh A*, " +
              num(seconds) + " s");
}

// --- 6 -------------------------------------------------------------------------------

void reduction() {
  std::size_t graphs = 0, cost_mismatch = 0, decisions = 0, disagreements = 0, yes = 0;
  for (std::uint64_t seed = 0; graphs < 200; ++seed) {
    ArcGraph g = random_digraph(derive_seed(6000, seed), 12, 0.25);
    ++graphs;
    Task t = mvap_to_strips(g);
    Cost dijkstra = shortest_path_cost(g);
    Cost plan = solve(t, SearchConfig::uniform_cost()).cost();
    cost_mismatch += plan != dijkstra || dijkstra != path_cost_reference(g);
    if (dijkstra.is_infinite()) {
      // Already a yes-instance for every h and k.
      ++decisions;
      disagreements += !solve_dmvap_exhaustive(g, 0, Cost::infinite()).yes;
      continue;
    }
    for (int k = 0; k <= 2; ++k) {
      Cost attacked = brute_force_attack(t, SearchConfig::uniform_cost(), k).attacked_cost;
      std::vector<Cost> hs;
      for (std::int64_t h = dijkstra.value(); h <= dijkstra.value() + 6; ++h) hs.push_back(Cost(h));
      hs.push_back(Cost::infinite());
      for (Cost h : hs) {
        bool mvap = solve_dmvap_exhaustive(g, k, h).yes;
        ++decisions;
        yes += mvap;
        disagreements += mvap != (attacked >= h);
      }
    }
  }
  verdict(6, cost_mismatch == 0 && disagreements == 0,
          std::to_string(graphs) + " digraphs, " + std::to_string(cost_mismatch) +
              " cost mismatches; " + std::to_string(decisions) + " decisions (" +
              std::to_string(yes) + " yes), " + std::to_string(disagreements) + " disagreements");
}

// --- 7 -------------------------------------------------------------------------------

void windows() {
  auto raw = random_strips_windows(1000, 4, 2024);
  std::mt19937_64 rng(77);
  std::size_t failed = 0;
  for (const auto& w : raw) {
    StripsWindow n = normalize_window(w);
    if (!strips_windows_equivalent(w, w) || !strips_windows_equivalent(n, n)) ++failed;
    StripsWindow renamed = rename_objects(w, random_renaming(w, rng));
    if (!strips_windows_equivalent(w, renamed) || !strips_windows_equivalent(renamed, w)) ++failed;
    if (normalize_window(n) != n) ++failed;
  }
  // Fresh builds alongside the ones from criteria 1-3.
  GridTableSpec gs;
  gs.count = 300;
  gs.maze.seed = 9100;
  built.push_back(build_grid_table(gs));
  gs.options = {true, true};
  built.push_back(build_grid_table(gs));
  StripsTableSpec ss;
  ss.count = 200;
  built.push_back(build_strips_table(ss, [](std::size_t i) {
    return generate_blocks({3 + int(i % 2), derive_seed(9200, i)});
  }));
  std::size_t non_canonical = 0, round_trip = 0, entries = 0;
  for (const auto& t : built) {
    entries += t.size();
    non_canonical += !canonical(t);
    std::string text = format_table(t);
    WindowTable back = parse_table(text);
    round_trip += !(back == t) || format_table(back) != text;
  }
  verdict(7, failed == 0 && non_canonical == 0 && round_trip == 0,
          std::to_string(raw.size()) + " windows, " + std::to_string(failed) +
              " equivalence/idempotence failures; " + std::to_string(built.size()) + " tables (" +
              std::to_string(entries) + " entries), " + std::to_string(non_canonical) +
              " non-canonical, " + std::to_string(round_trip) + " round-trip differences");
}

// --- 8 -------------------------------------------------------------------------------

void greedy_decrease() {
  ExperimentConfig c;
  c.flavor = "strips";
  c.count = 200;
  c.cargo = {3, 2, 4, 0};
  c.budgets = {1, 2, 3, 4};
  c.threats = {"offline-agent-heuristic", "offline-black-box"};
  auto count = [&](const SearchConfig& agent, std::size_t& errors) {
    c.agent = agent;
    auto result = run_experiment(c);
    std::size_t decreases = 0;
    for (const auto& row : result.report.rows) {
      decreases += row.decreases;
      errors += row.errors;
    }
    return decreases;
  };
  std::size_t greedy_errors = 0, optimal_errors = 0;
  std::size_t greedy = count(SearchConfig::greedy_additive(), greedy_errors);
  std::size_t optimal = count(SearchConfig::breadth_first(), optimal_errors);
  verdict(8, greedy > 0 && optimal == 0,
          "200 air-cargo tasks, budgets 1-4: greedy agent " + std::to_string(greedy) +
              " decreases, optimal agent " + std::to_string(optimal) + " (errors " +
              std::to_string(greedy_errors) + "/" + std::to_string(optimal_errors) + ")");
}

}  // namespace

int main() {
  std::vector<std::function<void()>> steps = {online_rates, dominance,    monotonicity, dstar,
                                              reduction,    windows,      greedy_decrease};
  for (auto& step : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      std::printf("criterion ?: FAIL  exception: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
