#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advplan/cost.hpp"
#include "advplan/grid.hpp"
#include "advplan/planner.hpp"
#include "advplan/strips.hpp"
#include "advplan/windows.hpp"

namespace advplan {

enum class AttackMode { kOnline, kOffline };
// kInformed reads the agent's queued move; the other two only predict it.
enum class Knowledge { kInformed, kAgentHeuristic, kBlackBox };

std::string to_string(AttackMode mode);
std::string to_string(Knowledge knowledge);
AttackMode parse_attack_mode(std::string_view text);
Knowledge parse_knowledge(std::string_view text);

struct ThreatModel {
  AttackMode mode = AttackMode::kOnline;
  Knowledge knowledge = Knowledge::kInformed;
  int budget = 1;
  // Black-box prediction heuristic: a grid heuristic name online, a planner
  // heuristic name offline. Empty means the per-flavor default.
  std::string adversary_heuristic;

  // Throws kInvalidInput: informed offline, budget outside [0, max_budget].
  void validate(int max_budget = 10) const;
  std::string name() const;  // "online-informed"
};

struct AttackReport {
  std::string instance;
  std::string attack;  // brute-force, online-oracle, offline, online
  std::string threat;
  int budget = 0;
  Cost baseline_cost{0};
  Cost attacked_cost{0};
  // Grounded action names or "(row,col)" wall cells, in order of application.
  std::vector<std::string> removed;
  std::vector<ActionId> removed_actions;
  std::vector<Cell> walls;
  std::string outcome = "ok";  // ok, budget-exhausted, error: ...
  std::size_t lookups = 0;
  std::size_t matches = 0;
  std::size_t illegal_skipped = 0;
  std::size_t adversary_expanded = 0;
  std::size_t agent_expanded = 0;
  std::size_t solves = 0;
  double attack_seconds = 0;
  double replan_seconds = 0;

  // Unsolvable after the attack counts as success.
  bool success() const { return attacked_cost > baseline_cost; }
  bool decreased() const { return attacked_cost < baseline_cost; }
};

// One JSON object per line; timings are left out when `timings` is false so
// repeated runs compare byte for byte.
std::string to_json(const AttackReport& report, bool timings = true);
AttackReport report_from_json(std::string_view line);

// --- oracles ---------------------------------------------------------------

struct BruteForceOptions {
  // Refuse when the worst-case number of re-solves exceeds this.
  std::size_t max_solves = 200'000;
};

// Exhaustive removal search. Branches on the actions of the current plan
// after each removal, which is exact for optimal agents: a removal set that
// misses the current optimal plan leaves its cost unchanged.
AttackReport brute_force_attack(const Task& task, const SearchConfig& agent, int k,
                                BruteForceOptions options = {});
// Walls placed before the agent starts, branching on shortest paths.
AttackReport brute_force_attack(const Grid& grid, int k, BruteForceOptions options = {});
// Online game tree: at every tick the adversary may wall any legal free
// neighbour of the agent, then the D* Lite agent moves. Upper-bounds every
// online window attack against the same agent.
AttackReport online_oracle_attack(const Grid& grid, GridHeuristic agent_heuristic, int k,
                                  BruteForceOptions options = {});

// --- prediction ------------------------------------------------------------

// argmin of H over the free neighbours; ties go to row-major order.
Cell predict_next_cell(const Grid& grid, Cell current, Cell goal, GridHeuristic h);

using StateHeuristic = std::function<Cost(const State&)>;
// argmin of H over the successors; ties go to the canonical state order.
// Returns the successor together with the action leading to it.
std::pair<State, ActionId> predict_next_state(const Task& task, const State& current,
                                              const StateHeuristic& h,
                                              const RemovedSet& removed = {});

// --- window attacks ------------------------------------------------------------

struct OfflineAttackConfig {
  SearchConfig agent = SearchConfig::breadth_first();
  // The adversary's own search; black-box adversaries use this, the others
  // search with the agent's configuration.
  SearchConfig adversary = SearchConfig::astar_additive();
  // Start the adversary's search over after every removal instead of
  // continuing from the current frontier.
  bool restart = false;
};

// Removals proposed by the adversary, in order; cumulative budgets take
// prefixes of one run.
struct OfflineChanges {
  std::vector<ActionId> removed;
  std::string outcome = "ok";
  std::size_t lookups = 0;
  std::size_t matches = 0;
  std::size_t expanded = 0;
};

OfflineChanges offline_changes(const Task& task, const WindowTable& table,
                               const ThreatModel& threat, const OfflineAttackConfig& config);
AttackReport offline_attack(const Task& task, const WindowTable& table,
                            const ThreatModel& threat, const OfflineAttackConfig& config = {});

struct TranscriptEvent {
  int tick = 0;
  std::string actor;   // agent, adversary
  std::string action;  // move, wall, illegal, disconnected, goal
  Cell cell;
  Cost cost_to_date{0};
};

std::string to_json(const TranscriptEvent& event);

struct OnlineAttackResult {
  AttackReport report;
  std::vector<TranscriptEvent> transcript;
};

OnlineAttackResult online_attack(const Grid& grid, const WindowTable& table,
                                 const ThreatModel& threat,
                                 GridHeuristic agent_heuristic = GridHeuristic::kEuclidean);

// Adversary heuristic implied by the threat model for a grid agent.
GridHeuristic adversary_grid_heuristic(const ThreatModel& threat, GridHeuristic agent);

}  // namespace advplan
