#include "advplan/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <json.hpp>
#include <set>

#include "advplan/util.hpp"
#include "sexpr.hpp"

namespace advplan {

using nlohmann::json;

std::string to_string(AttackMode mode) {
  return mode == AttackMode::kOnline ? "online" : "offline";
}

std::string to_string(Knowledge knowledge) {
  switch (knowledge) {
    case Knowledge::kInformed: return "informed";
    case Knowledge::kAgentHeuristic: return "agent-heuristic";
    case Knowledge::kBlackBox: return "black-box";
  }
  return "?";
}

AttackMode parse_attack_mode(std::string_view text) {
  std::string t = detail::to_lower(text);
  if (t == "online") return AttackMode::kOnline;
  if (t == "offline") return AttackMode::kOffline;
  throw Error(ErrorCategory::kUsage, "unknown attack mode: " + t);
}

Knowledge parse_knowledge(std::string_view text) {
  std::string t = detail::to_lower(text);
  if (t == "informed") return Knowledge::kInformed;
  if (t == "agent-heuristic" || t == "agent") return Knowledge::kAgentHeuristic;
  if (t == "black-box" || t == "blackbox") return Knowledge::kBlackBox;
  throw Error(ErrorCategory::kUsage, "unknown adversary knowledge: " + t);
}

void ThreatModel::validate(int max_budget) const {
  if (knowledge == Knowledge::kInformed && mode == AttackMode::kOffline) {
    throw Error(ErrorCategory::kInvalidInput, "an informed adversary must be online");
  }
  if (budget < 0 || budget > max_budget) {
    throw Error(ErrorCategory::kInvalidInput,
                "budget " + std::to_string(budget) + " outside [0, " +
                    std::to_string(max_budget) + "]");
  }
}

std::string ThreatModel::name() const { return to_string(mode) + "-" + to_string(knowledge); }

// --- reports -------------------------------------------------------------------

namespace {

json cost_json(Cost c) { return c.is_finite() ? json(c.value()) : json("inf"); }

Cost cost_from(const json& j) {
  return j.is_string() ? Cost::parse(j.get<std::string>()) : Cost(j.get<std::int64_t>());
}

}  // namespace

std::string to_json(const AttackReport& r, bool timings) {
  json j;
  j["instance"] = r.instance;
  j["attack"] = r.attack;
  j["threat"] = r.threat;
  j["budget"] = r.budget;
  j["baseline_cost"] = cost_json(r.baseline_cost);
  j["attacked_cost"] = cost_json(r.attacked_cost);
  j["success"] = r.success();
  j["decreased"] = r.decreased();
  j["removed"] = r.removed;
  j["removed_actions"] = r.removed_actions;
  json walls = json::array();
  for (Cell c : r.walls) walls.push_back({c.row, c.col});
  j["walls"] = walls;
  j["outcome"] = r.outcome;
  j["lookups"] = r.lookups;
  j["matches"] = r.matches;
  j["illegal_skipped"] = r.illegal_skipped;
  j["adversary_expanded"] = r.adversary_expanded;
  j["agent_expanded"] = r.agent_expanded;
  j["solves"] = r.solves;
  if (timings) {
    j["attack_seconds"] = r.attack_seconds;
    j["replan_seconds"] = r.replan_seconds;
  }
  return j.dump();
}

AttackReport report_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("bad report record: ") + e.what(), 1, 0);
  }
  AttackReport r;
  try {
    r.instance = j.at("instance").get<std::string>();
    r.attack = j.at("attack").get<std::string>();
    r.threat = j.at("threat").get<std::string>();
    r.budget = j.at("budget").get<int>();
    r.baseline_cost = cost_from(j.at("baseline_cost"));
    r.attacked_cost = cost_from(j.at("attacked_cost"));
    r.removed = j.at("removed").get<std::vector<std::string>>();
    r.removed_actions = j.at("removed_actions").get<std::vector<ActionId>>();
    for (auto& w : j.at("walls")) r.walls.push_back({w.at(0).get<int>(), w.at(1).get<int>()});
    r.outcome = j.at("outcome").get<std::string>();
    r.lookups = j.at("lookups").get<std::size_t>();
    r.matches = j.at("matches").get<std::size_t>();
    r.illegal_skipped = j.at("illegal_skipped").get<std::size_t>();
    r.adversary_expanded = j.at("adversary_expanded").get<std::size_t>();
    r.agent_expanded = j.at("agent_expanded").get<std::size_t>();
    r.solves = j.at("solves").get<std::size_t>();
    r.attack_seconds = j.value("attack_seconds", 0.0);
    r.replan_seconds = j.value("replan_seconds", 0.0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad report record: ") + e.what(), 1, 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad cost in report record: ") + e.what(), 1, 0);
  }
  return r;
}

std::string to_json(const TranscriptEvent& e) {
  json j;
  j["tick"] = e.tick;
  j["actor"] = e.actor;
  j["action"] = e.action;
  j["cell"] = {e.cell.row, e.cell.col};
  j["cost_to_date"] = cost_json(e.cost_to_date);
  return j.dump();
}

// --- brute force -------------------------------------------------------------------

namespace {

void check_bound(std::size_t plan_length, int k, const BruteForceOptions& options) {
  double worst = std::pow(static_cast<double>(std::max<std::size_t>(plan_length, 1)), k);
  if (worst > static_cast<double>(options.max_solves)) {
    throw Error(ErrorCategory::kBoundExceeded,
                "brute force needs up to " + std::to_string(plan_length) + "^" +
                    std::to_string(k) + " solves, bound is " +
                    std::to_string(options.max_solves));
  }
}

void check_k(int k) {
  if (k < 0) throw Error(ErrorCategory::kInvalidInput, "negative budget");
}

}  // namespace

AttackReport brute_force_attack(const Task& task, const SearchConfig& agent, int k,
                                BruteForceOptions options) {
  check_k(k);
  Stopwatch clock;
  AttackReport report;
  report.attack = "brute-force";
  report.threat = "oracle";
  report.budget = k;
  auto base = solve(task, agent);
  report.solves = 1;
  report.agent_expanded = base.expanded;
  if (!base.solved()) {
    throw Error(ErrorCategory::kUnsolvable, "baseline task is not solved by the agent");
  }
  check_bound(base.plan.actions.size(), k, options);
  report.baseline_cost = report.attacked_cost = base.cost();

  std::set<std::vector<ActionId>> seen;
  std::vector<ActionId> chosen;
  std::vector<ActionId> best;
  bool exhausted = false;
  // Depth-first over removals; the first maximum found is kept.
  std::function<void(const Plan&)> recurse = [&](const Plan& plan) {
    if (static_cast<int>(chosen.size()) == k) return;
    // Plan order, without repeats, keeps the first maximum reproducible.
    std::vector<ActionId> ordered;
    for (ActionId a : plan.actions) {
      if (std::find(ordered.begin(), ordered.end(), a) == ordered.end()) ordered.push_back(a);
    }
    for (ActionId a : ordered) {
      chosen.push_back(a);
      std::vector<ActionId> key = chosen;
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) {
        auto r = solve(task, agent, RemovedSet(key));
        ++report.solves;
        report.agent_expanded += r.expanded;
        if (r.outcome == SearchOutcome::kBudgetExhausted) {
          exhausted = true;
        } else {
          if (r.cost() > report.attacked_cost) {
            report.attacked_cost = r.cost();
            best = chosen;
          }
          if (r.solved()) recurse(r.plan);
        }
      }
      chosen.pop_back();
      if (report.attacked_cost.is_infinite()) return;
    }
  };
  recurse(base.plan);
  report.removed_actions = best;
  for (ActionId a : best) report.removed.push_back(task.operators[a].name());
  if (exhausted) report.outcome = "budget-exhausted";
  report.attack_seconds = clock.seconds();
  return report;
}

AttackReport brute_force_attack(const Grid& grid, int k, BruteForceOptions options) {
  check_k(k);
  Stopwatch clock;
  AttackReport report;
  report.attack = "brute-force";
  report.threat = "oracle";
  report.budget = k;
  auto base = shortest_path(grid, grid.start(), grid.goal());
  report.solves = 1;
  if (base.empty()) throw Error(ErrorCategory::kUnsolvable, "goal unreachable");
  check_bound(base.size(), k, options);
  report.baseline_cost = report.attacked_cost = Cost(static_cast<std::int64_t>(base.size()) - 1);

  std::set<std::vector<Cell>> seen;
  std::vector<Cell> chosen;
  std::vector<Cell> best;
  Grid work = grid;
  std::function<void(const std::vector<Cell>&)> recurse = [&](const std::vector<Cell>& path) {
    if (static_cast<int>(chosen.size()) == k) return;
    for (std::size_t j = 1; j + 1 < path.size(); ++j) {
      Cell c = path[j];
      chosen.push_back(c);
      std::vector<Cell> key = chosen;
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) {
        work.set_wall(c);
        auto next = shortest_path(work, grid.start(), grid.goal());
        ++report.solves;
        Cost cost = next.empty() ? Cost::infinite()
                                 : Cost(static_cast<std::int64_t>(next.size()) - 1);
        if (cost > report.attacked_cost) {
          report.attacked_cost = cost;
          best = chosen;
        }
        if (!next.empty()) recurse(next);
        work.set_wall(c, false);
      }
      chosen.pop_back();
      if (report.attacked_cost.is_infinite()) return;
    }
  };
  recurse(base);
  report.walls = best;
  for (Cell c : best) report.removed.push_back(c.to_string());
  report.attack_seconds = clock.seconds();
  return report;
}

namespace {

bool legal_wall(const Grid& world, Cell c, Cell agent) {
  return world.in_bounds(c) && world.is_free(c) && c != world.goal() &&
         c != world.start() && c != agent;
}

}  // namespace

AttackReport online_oracle_attack(const Grid& grid, GridHeuristic agent_heuristic, int k,
                                  BruteForceOptions options) {
  check_k(k);
  Stopwatch clock;
  AttackReport report;
  report.attack = "online-oracle";
  report.threat = "oracle";
  report.budget = k;
  DStarLite root(grid, grid.start(), agent_heuristic);
  auto base = root.path_cost();
  if (!base) throw Error(ErrorCategory::kUnsolvable, "goal unreachable");
  // Each tick offers at most four walls, so the tree has at most
  // sum_j C(L, j) 4^j leaves for a path of length L.
  check_bound(static_cast<std::size_t>(*base) * 4, k, options);
  report.baseline_cost = Cost(*base);

  struct Outcome {
    Cost cost;
    std::vector<Cell> walls;
  };
  Cell goal = grid.goal();
  // Value of the game with the agent about to act at `steps` moves walked.
  std::function<Outcome(DStarLite&, Grid&, int, std::int64_t)> play =
      [&](DStarLite& agent, Grid& world, int budget, std::int64_t steps) -> Outcome {
    ++report.solves;
    if (report.solves > options.max_solves) {
      throw Error(ErrorCategory::kBoundExceeded, "online oracle exceeded its solve bound");
    }
    Cell at = agent.position();
    if (at == goal) return {Cost(steps), {}};
    if (budget == 0) {
      auto rest = agent.path_cost();
      return {rest ? Cost(steps + *rest) : Cost::infinite(), {}};
    }
    Outcome best{Cost(0), {}};
    bool first = true;
    auto consider = [&](Outcome o) {
      if (first || o.cost > best.cost) best = std::move(o);
      first = false;
    };
    {
      // No change this tick.
      auto next = agent.next_move();
      if (!next) return {Cost::infinite(), {}};
      DStarLite moved = agent;
      moved.move_to(*next);
      consider(play(moved, world, budget, steps + 1));
    }
    for (Cell c : world.free_neighbors(at)) {
      if (best.cost.is_infinite()) break;
      if (!legal_wall(world, c, at)) continue;
      Grid walled = world;
      walled.set_wall(c);
      DStarLite blocked = agent;
      blocked.notify_wall(c);
      auto next = blocked.next_move();
      Outcome o;
      if (!next) {
        o = {Cost::infinite(), {}};
      } else {
        blocked.move_to(*next);
        o = play(blocked, walled, budget - 1, steps + 1);
      }
      o.walls.insert(o.walls.begin(), c);
      consider(std::move(o));
    }
    return best;
  };
  Grid world = grid;
  Outcome result = play(root, world, k, 0);
  report.attacked_cost = result.cost;
  report.walls = result.walls;
  for (Cell c : result.walls) report.removed.push_back(c.to_string());
  report.attack_seconds = clock.seconds();
  return report;
}

// --- prediction ----------------------------------------------------------------------

Cell predict_next_cell(const Grid& grid, Cell current, Cell goal, GridHeuristic h) {
  auto neighbors = grid.free_neighbors(current);
  if (neighbors.empty()) {
    throw Error(ErrorCategory::kPrecondition, "no free neighbour of " + current.to_string());
  }
  Cell best = neighbors.front();
  double best_h = grid_heuristic(h, best, goal);
  for (Cell c : neighbors) {
    double v = grid_heuristic(h, c, goal);
    if (v < best_h || (v == best_h && c < best)) {
      best = c;
      best_h = v;
    }
  }
  return best;
}

std::pair<State, ActionId> predict_next_state(const Task& task, const State& current,
                                              const StateHeuristic& h,
                                              const RemovedSet& removed) {
  SuccessorGenerator successors(task);
  std::vector<ActionId> applicable;
  successors.applicable(current, removed, applicable);
  if (applicable.empty()) throw Error(ErrorCategory::kPrecondition, "state has no successors");
  std::optional<std::pair<State, ActionId>> best;
  Cost best_h = Cost::infinite();
  for (ActionId a : applicable) {
    State s = successor(current, task.operators[a]);
    Cost v = h(s);
    if (!best || v < best_h || (v == best_h && s < best->first)) {
      best = {std::move(s), a};
      best_h = v;
    }
  }
  return *best;
}

GridHeuristic adversary_grid_heuristic(const ThreatModel& threat, GridHeuristic agent) {
  if (threat.knowledge != Knowledge::kBlackBox) return agent;
  if (threat.adversary_heuristic.empty()) return GridHeuristic::kManhattan;
  return parse_grid_heuristic(threat.adversary_heuristic);
}

// --- offline window attack -------------------------------------------------------------

OfflineChanges offline_changes(const Task& task, const WindowTable& table,
                               const ThreatModel& threat, const OfflineAttackConfig& config) {
  threat.validate();
  if (threat.mode != AttackMode::kOffline) {
    throw Error(ErrorCategory::kInvalidInput, "offline attack needs an offline threat model");
  }
  if (table.flavor() != WindowFlavor::kStrips) {
    throw Error(ErrorCategory::kInvalidInput, "offline attack needs a STRIPS window table");
  }
  OfflineChanges out;
  if (threat.budget == 0 || table.empty()) return out;
  SearchConfig adversary =
      threat.knowledge == Knowledge::kBlackBox ? config.adversary : config.agent;
  if (threat.knowledge == Knowledge::kBlackBox && !threat.adversary_heuristic.empty()) {
    adversary.heuristic = parse_heuristic_kind(threat.adversary_heuristic);
  }
  const std::size_t n = static_cast<std::size_t>(table.window_size());
  RemovedSet removed;
  auto engine = std::make_unique<SearchEngine>(task, adversary);
  std::size_t spent = 0;  // expansions of abandoned engines
  while (out.removed.size() < static_cast<std::size_t>(threat.budget)) {
    if (spent + engine->expanded() >= adversary.node_budget) {
      out.outcome = "budget-exhausted";
      break;
    }
    auto id = engine->pop();
    if (!id) break;
    const auto& node = engine->node(*id);
    if (node.depth + 1 >= n) {
      auto ids = engine->path_to(*id);
      std::vector<State> states;
      std::vector<ActionId> actions;
      for (std::size_t i = ids.size() - n; i < ids.size(); ++i) {
        states.push_back(engine->node(ids[i]).state);
        if (i > ids.size() - n) actions.push_back(engine->node(ids[i]).action);
      }
      ++out.lookups;
      auto window = normalize_window(
          extract_strips_window(task, states, actions, states.size() - 1, static_cast<int>(n)));
      if (table.find(window)) {
        ++out.matches;
        ActionId a = node.action;
        out.removed.push_back(a);
        removed.insert(a);
        if (config.restart) {
          spent += engine->expanded();
          engine = std::make_unique<SearchEngine>(task, adversary, removed);
        } else {
          engine->remove_action(a);
        }
        continue;
      }
    }
    if (engine->is_goal(*id)) break;
    engine->expand(*id);
  }
  out.expanded = spent + engine->expanded();
  return out;
}

AttackReport offline_attack(const Task& task, const WindowTable& table,
                            const ThreatModel& threat, const OfflineAttackConfig& config) {
  Stopwatch clock;
  AttackReport report;
  report.attack = "offline";
  report.threat = threat.name();
  report.budget = threat.budget;
  auto base = solve(task, config.agent);
  if (!base.solved()) {
    throw Error(ErrorCategory::kUnsolvable, "baseline task is not solved by the agent");
  }
  report.baseline_cost = base.cost();
  OfflineChanges changes = offline_changes(task, table, threat, config);
  report.outcome = changes.outcome;
  report.lookups = changes.lookups;
  report.matches = changes.matches;
  report.adversary_expanded = changes.expanded;
  report.removed_actions = changes.removed;
  for (ActionId a : changes.removed) report.removed.push_back(task.operators[a].name());
  report.attack_seconds = clock.seconds();
  Stopwatch replan;
  auto attacked = changes.removed.empty() ? base
                                          : solve(task, config.agent, RemovedSet(changes.removed));
  report.replan_seconds = replan.seconds();
  report.agent_expanded = base.expanded + attacked.expanded;
  report.solves = changes.removed.empty() ? 1 : 2;
  if (attacked.outcome == SearchOutcome::kBudgetExhausted) {
    report.outcome = "agent-budget-exhausted";
    report.attacked_cost = report.baseline_cost;
  } else {
    report.attacked_cost = attacked.cost();
  }
  return report;
}

// --- online window attack ----------------------------------------------------------------

OnlineAttackResult online_attack(const Grid& grid, const WindowTable& table,
                                 const ThreatModel& threat, GridHeuristic agent_heuristic) {
  threat.validate();
  if (threat.mode != AttackMode::kOnline) {
    throw Error(ErrorCategory::kInvalidInput, "online attack needs an online threat model");
  }
  if (table.flavor() != WindowFlavor::kGrid) {
    throw Error(ErrorCategory::kInvalidInput, "online attack needs a grid window table");
  }
  Stopwatch clock;
  OnlineAttackResult result;
  AttackReport& report = result.report;
  report.attack = "online";
  report.threat = threat.name();
  report.budget = threat.budget;

  Grid world = grid;
  DStarLite agent(world, world.start(), agent_heuristic);
  auto base = agent.path_cost();
  if (!base) throw Error(ErrorCategory::kUnsolvable, "goal unreachable");
  report.baseline_cost = Cost(*base);
  const GridHeuristic h_adv = adversary_grid_heuristic(threat, agent_heuristic);
  const int n = table.window_size();

  std::int64_t walked = 0;
  int tick = 0;
  auto log = [&](const char* actor, const char* action, Cell c, Cost cost) {
    result.transcript.push_back({tick, actor, action, c, cost});
  };
  double replan = 0;
  while (agent.position() != world.goal()) {
    ++tick;
    Cell at = agent.position();
    std::optional<Cell> next = agent.next_move();
    if (next && static_cast<int>(report.walls.size()) < threat.budget) {
      Cell predicted = threat.knowledge == Knowledge::kInformed
                           ? *next
                           : predict_next_cell(world, at, world.goal(), h_adv);
      ++report.lookups;
      GridWindow window = extract_grid_window(world, predicted, n, at);
      if (table.find(window)) {
        ++report.matches;
        if (legal_wall(world, predicted, at)) {
          world.set_wall(predicted);
          Stopwatch sw;
          agent.notify_wall(predicted);
          next = agent.next_move();
          replan += sw.seconds();
          report.walls.push_back(predicted);
          report.removed.push_back(predicted.to_string());
          log("adversary", "wall", predicted, Cost(walked));
        } else {
          ++report.illegal_skipped;
          log("adversary", "illegal", predicted, Cost(walked));
        }
      }
    }
    if (!next) {
      log("agent", "disconnected", at, Cost::infinite());
      break;
    }
    agent.move_to(*next);
    ++walked;
    log("agent", "move", *next, Cost(walked));
  }
  report.attacked_cost =
      agent.position() == world.goal() ? Cost(walked) : Cost::infinite();
  if (agent.position() == world.goal()) log("agent", "goal", world.goal(), Cost(walked));
  report.agent_expanded = agent.expansions();
  report.replan_seconds = replan;
  report.attack_seconds = clock.seconds();
  return result;
}

}  // namespace advplan
