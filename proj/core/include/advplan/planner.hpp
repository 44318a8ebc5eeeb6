#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "advplan/strips.hpp"

namespace advplan {

enum class SearchAlgorithm { kBreadthFirst, kAStar, kGreedyBestFirst };
enum class HeuristicKind { kZero, kAdditive, kGoalCount };

std::string to_string(SearchAlgorithm algorithm);
std::string to_string(HeuristicKind heuristic);
SearchAlgorithm parse_search_algorithm(std::string_view text);
HeuristicKind parse_heuristic_kind(std::string_view text);

struct SearchConfig {
  SearchAlgorithm algorithm = SearchAlgorithm::kAStar;
  // Ignored by breadth-first search.
  HeuristicKind heuristic = HeuristicKind::kZero;
  std::size_t node_budget = 1'000'000;
  // Equal priorities are ordered by the canonical state order unless a
  // seeded random tie-break is requested.
  bool random_tie_break = false;
  std::uint64_t tie_break_seed = 0;

  static SearchConfig breadth_first() {
    return {SearchAlgorithm::kBreadthFirst, HeuristicKind::kZero};
  }
  static SearchConfig uniform_cost() {
    return {SearchAlgorithm::kAStar, HeuristicKind::kZero};
  }
  static SearchConfig astar_additive() {
    return {SearchAlgorithm::kAStar, HeuristicKind::kAdditive};
  }
  static SearchConfig greedy_additive() {
    return {SearchAlgorithm::kGreedyBestFirst, HeuristicKind::kAdditive};
  }
  std::string describe() const;
};

// Grounded actions withheld from a task. Small sorted set; attacks remove
// at most a handful of actions.
class RemovedSet {
 public:
  RemovedSet() = default;
  explicit RemovedSet(std::vector<ActionId> ids);

  void insert(ActionId id);
  bool contains(ActionId id) const;
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<ActionId>& ids() const { return ids_; }
  bool includes(const RemovedSet& other) const;

 private:
  std::vector<ActionId> ids_;
};

enum class SearchOutcome { kPlan, kUnsolvable, kBudgetExhausted };
std::string to_string(SearchOutcome outcome);

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::kUnsolvable;
  Plan plan = Plan::unsolvable();
  std::size_t expanded = 0;
  std::size_t generated = 0;

  bool solved() const { return outcome == SearchOutcome::kPlan; }
  // Infinite unless a plan was found.
  Cost cost() const { return solved() ? plan.total_cost : Cost::infinite(); }
};

// Applicable-action enumeration indexed by each action's first
// precondition.
class SuccessorGenerator {
 public:
  explicit SuccessorGenerator(const Task& task);
  // Applicable, non-removed actions in ascending id order.
  void applicable(const State& state, const RemovedSet& removed,
                  std::vector<ActionId>& out) const;

 private:
  const Task* task_;
  std::vector<std::vector<ActionId>> by_first_precondition_;
  std::vector<ActionId> unconditional_;
};

// Additive relaxed-plan cost estimate with a precomputed
// precondition index, reusable across many states.
class AdditiveHeuristic {
 public:
  explicit AdditiveHeuristic(const Task& task);
  Cost evaluate(const State& state, const RemovedSet& removed = {}) const;

 private:
  const Task* task_;
  std::vector<std::vector<ActionId>> actions_with_precondition_;
};

// |goal| - |goal ∩ state|
std::int64_t h_goal_count(const State& state, std::span<const AtomId> goal);
Cost h_additive(const Task& task, const State& state,
                const RemovedSet& removed = {});

using NodeId = std::uint32_t;

// Step-wise best-first search over a grounded task. solve() drives it to
// completion; the offline adversary drives it one expansion at a time and
// may withdraw actions mid-search.
class SearchEngine {
 public:
  struct Node {
    State state;
    std::int64_t g = 0;
    std::int64_t h = 0;
    std::optional<NodeId> parent;
    ActionId action = 0;  // meaningless for the root
    std::uint32_t depth = 0;
    std::uint64_t tie = 0;
    bool closed = false;
  };

  SearchEngine(const Task& task, SearchConfig config, RemovedSet removed = {});
  SearchEngine(const SearchEngine&) = delete;
  SearchEngine& operator=(const SearchEngine&) = delete;

  // Next node to expand, skipping stale entries and nodes invalidated by a
  // removal. Empty when the frontier is exhausted.
  std::optional<NodeId> pop();
  void expand(NodeId id);
  bool is_goal(NodeId id) const { return task_->is_goal(nodes_[id].state); }

  // Withdraws an action; nodes reached through it become invalid.
  void remove_action(ActionId action);
  bool valid(NodeId id) const { return valid_[id]; }

  const Node& node(NodeId id) const { return nodes_[id]; }
  // Root-to-node sequence of node ids.
  std::vector<NodeId> path_to(NodeId id) const;
  Plan plan_to(NodeId id) const;

  const RemovedSet& removed() const { return removed_; }
  std::size_t expanded() const { return expanded_; }
  std::size_t generated() const { return generated_; }
  const SearchConfig& config() const { return config_; }

 private:
  struct Entry {
    std::int64_t primary;
    std::int64_t secondary;
    std::uint64_t tie;
    NodeId id;
    std::int64_t g;
  };
  struct EntryAfter {
    const SearchEngine* engine;
    bool operator()(const Entry& a, const Entry& b) const;
  };

  std::optional<std::int64_t> heuristic(const State& state) const;
  void push(NodeId id);
  NodeId add_node(Node node);

  const Task* task_;
  SearchConfig config_;
  RemovedSet removed_;
  SuccessorGenerator successors_;
  std::optional<AdditiveHeuristic> additive_;
  std::vector<Node> nodes_;
  std::vector<bool> valid_;
  std::unordered_map<State, NodeId, StateHash> index_;
  std::priority_queue<Entry, std::vector<Entry>, EntryAfter> open_;
  std::mt19937_64 rng_;
  std::uint64_t sequence_ = 0;
  std::size_t expanded_ = 0;
  std::size_t generated_ = 0;
  std::vector<ActionId> scratch_;
};

// Breadth-first returns a plan with the fewest actions (cost-optimal on
// unit-cost tasks); A* with the zero heuristic is uniform-cost search and is
// cost-optimal on any task. Greedy best-first returns some valid plan.
SearchResult solve(const Task& task, const SearchConfig& config,
                   const RemovedSet& removed = {});

}  // namespace advplan
