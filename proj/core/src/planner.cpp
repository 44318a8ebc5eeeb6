#include "advplan/planner.hpp"

#include <algorithm>
#include <limits>

#include "sexpr.hpp"

namespace advplan {

std::string to_string(SearchAlgorithm algorithm) {
  switch (algorithm) {
    case SearchAlgorithm::kBreadthFirst: return "bfs";
    case SearchAlgorithm::kAStar: return "astar";
    case SearchAlgorithm::kGreedyBestFirst: return "gbfs";
  }
  return "?";
}

std::string to_string(HeuristicKind heuristic) {
  switch (heuristic) {
    case HeuristicKind::kZero: return "zero";
    case HeuristicKind::kAdditive: return "additive";
    case HeuristicKind::kGoalCount: return "goal-count";
  }
  return "?";
}

SearchAlgorithm parse_search_algorithm(std::string_view text) {
  std::string t = detail::to_lower(text);
  if (t == "bfs") return SearchAlgorithm::kBreadthFirst;
  if (t == "astar" || t == "a*") return SearchAlgorithm::kAStar;
  if (t == "gbfs" || t == "greedy") return SearchAlgorithm::kGreedyBestFirst;
  throw Error(ErrorCategory::kUsage, "unknown search algorithm: " + t);
}

HeuristicKind parse_heuristic_kind(std::string_view text) {
  std::string t = detail::to_lower(text);
  if (t == "zero" || t == "none") return HeuristicKind::kZero;
  if (t == "additive" || t == "add") return HeuristicKind::kAdditive;
  if (t == "goal-count" || t == "goalcount") return HeuristicKind::kGoalCount;
  throw Error(ErrorCategory::kUsage, "unknown heuristic: " + t);
}

std::string SearchConfig::describe() const {
  std::string out = to_string(algorithm);
  if (algorithm != SearchAlgorithm::kBreadthFirst) {
    out += "+" + to_string(heuristic);
  }
  return out;
}

std::string to_string(SearchOutcome outcome) {
  switch (outcome) {
    case SearchOutcome::kPlan: return "plan";
    case SearchOutcome::kUnsolvable: return "unsolvable";
    case SearchOutcome::kBudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

RemovedSet::RemovedSet(std::vector<ActionId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

void RemovedSet::insert(ActionId id) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) ids_.insert(it, id);
}

bool RemovedSet::contains(ActionId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool RemovedSet::includes(const RemovedSet& other) const {
  return std::includes(ids_.begin(), ids_.end(), other.ids_.begin(),
                       other.ids_.end());
}

SuccessorGenerator::SuccessorGenerator(const Task& task)
    : task_(&task), by_first_precondition_(task.atoms.size()) {
  for (ActionId id = 0; id < task.operators.size(); ++id) {
    const auto& pre = task.operators[id].preconditions;
    if (pre.empty()) {
      unconditional_.push_back(id);
    } else {
      by_first_precondition_[pre.front()].push_back(id);
    }
  }
}

void SuccessorGenerator::applicable(const State& state,
                                    const RemovedSet& removed,
                                    std::vector<ActionId>& out) const {
  out.clear();
  for (ActionId id : unconditional_) {
    if (!removed.contains(id)) out.push_back(id);
  }
  for (AtomId atom : state) {
    for (ActionId id : by_first_precondition_[atom]) {
      if (removed.contains(id)) continue;
      if (is_applicable(state, task_->operators[id])) out.push_back(id);
    }
  }
  std::sort(out.begin(), out.end());
}

AdditiveHeuristic::AdditiveHeuristic(const Task& task)
    : task_(&task), actions_with_precondition_(task.atoms.size()) {
  for (ActionId id = 0; id < task.operators.size(); ++id) {
    for (AtomId atom : task.operators[id].preconditions) {
      actions_with_precondition_[atom].push_back(id);
    }
  }
}

Cost AdditiveHeuristic::evaluate(const State& state,
                                 const RemovedSet& removed) const {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  const auto& ops = task_->operators;
  std::vector<std::int64_t> cost(task_->atoms.size(), kInf);
  std::vector<std::uint32_t> unsatisfied(ops.size());
  std::vector<std::int64_t> sum(ops.size(), 0);
  using Item = std::pair<std::int64_t, AtomId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

  auto relax = [&](ActionId id) {
    const auto& action = ops[id];
    std::int64_t value = sum[id] + action.cost.value();
    for (AtomId atom : action.add_effects) {
      if (value < cost[atom]) {
        cost[atom] = value;
        queue.emplace(value, atom);
      }
    }
  };

  for (AtomId atom : state) {
    cost[atom] = 0;
    queue.emplace(0, atom);
  }
  for (ActionId id = 0; id < ops.size(); ++id) {
    unsatisfied[id] = static_cast<std::uint32_t>(ops[id].preconditions.size());
    if (unsatisfied[id] == 0 && !removed.contains(id)) relax(id);
  }
  std::size_t goals_left = task_->goal_atoms.size();
  std::vector<bool> settled(task_->atoms.size(), false);
  while (!queue.empty() && goals_left > 0) {
    auto [value, atom] = queue.top();
    queue.pop();
    if (settled[atom] || value != cost[atom]) continue;
    settled[atom] = true;
    if (std::binary_search(task_->goal_atoms.begin(), task_->goal_atoms.end(),
                           atom)) {
      --goals_left;
    }
    for (ActionId id : actions_with_precondition_[atom]) {
      if (removed.contains(id)) continue;
      sum[id] += value;
      if (--unsatisfied[id] == 0) relax(id);
    }
  }
  Cost total{0};
  for (AtomId goal : task_->goal_atoms) {
    if (cost[goal] == kInf) return Cost::infinite();
    total += Cost(cost[goal]);
  }
  return total;
}

std::int64_t h_goal_count(const State& state, std::span<const AtomId> goal) {
  std::int64_t satisfied = 0;
  for (AtomId g : goal) satisfied += state.contains(g) ? 1 : 0;
  return static_cast<std::int64_t>(goal.size()) - satisfied;
}

Cost h_additive(const Task& task, const State& state,
                const RemovedSet& removed) {
  return AdditiveHeuristic(task).evaluate(state, removed);
}

bool SearchEngine::EntryAfter::operator()(const Entry& a,
                                          const Entry& b) const {
  if (a.primary != b.primary) return a.primary > b.primary;
  if (a.secondary != b.secondary) return a.secondary > b.secondary;
  if (a.tie != b.tie) return a.tie > b.tie;
  return engine->nodes_[b.id].state < engine->nodes_[a.id].state;
}

SearchEngine::SearchEngine(const Task& task, SearchConfig config,
                           RemovedSet removed)
    : task_(&task),
      config_(config),
      removed_(std::move(removed)),
      successors_(task),
      open_(EntryAfter{this}),
      rng_(config.tie_break_seed) {
  if (!task.grounded) {
    throw Error(ErrorCategory::kInvalidInput, "search requires a grounded task");
  }
  if (config_.node_budget == 0) {
    throw Error(ErrorCategory::kUsage, "node budget must be positive");
  }
  if (config_.algorithm != SearchAlgorithm::kBreadthFirst &&
      config_.heuristic == HeuristicKind::kAdditive) {
    additive_.emplace(task);
  }
  auto h = heuristic(task.initial_state);
  if (!h) return;
  Node root;
  root.state = task.initial_state;
  root.h = *h;
  push(add_node(std::move(root)));
}

std::optional<std::int64_t> SearchEngine::heuristic(const State& state) const {
  if (config_.algorithm == SearchAlgorithm::kBreadthFirst) return 0;
  switch (config_.heuristic) {
    case HeuristicKind::kZero:
      return 0;
    case HeuristicKind::kGoalCount:
      return h_goal_count(state, task_->goal_atoms);
    case HeuristicKind::kAdditive: {
      Cost c = additive_->evaluate(state, removed_);
      if (c.is_infinite()) return std::nullopt;
      return c.value();
    }
  }
  return 0;
}

NodeId SearchEngine::add_node(Node node) {
  auto id = static_cast<NodeId>(nodes_.size());
  node.tie = config_.random_tie_break ? rng_() : 0;
  index_[node.state] = id;
  nodes_.push_back(std::move(node));
  valid_.push_back(true);
  ++generated_;
  return id;
}

void SearchEngine::push(NodeId id) {
  const Node& n = nodes_[id];
  Entry e{0, 0, n.tie, id, n.g};
  switch (config_.algorithm) {
    case SearchAlgorithm::kBreadthFirst:
      e.primary = n.depth;
      e.tie = sequence_++;
      break;
    case SearchAlgorithm::kAStar:
      e.primary = n.g + n.h;
      e.secondary = n.h;
      break;
    case SearchAlgorithm::kGreedyBestFirst:
      e.primary = n.h;
      break;
  }
  open_.push(e);
}

std::optional<NodeId> SearchEngine::pop() {
  while (!open_.empty()) {
    Entry e = open_.top();
    open_.pop();
    Node& n = nodes_[e.id];
    if (!valid_[e.id] || n.closed || e.g != n.g) continue;
    return e.id;
  }
  return std::nullopt;
}

void SearchEngine::expand(NodeId id) {
  nodes_[id].closed = true;
  ++expanded_;
  const State parent_state = nodes_[id].state;
  const std::int64_t parent_g = nodes_[id].g;
  const std::uint32_t parent_depth = nodes_[id].depth;
  successors_.applicable(parent_state, removed_, scratch_);
  const std::vector<ActionId> actions = scratch_;
  for (ActionId a : actions) {
    const GroundedAction& action = task_->operators[a];
    State next = successor(parent_state, action);
    std::int64_t g = parent_g + action.cost.value();
    auto it = index_.find(next);
    if (it != index_.end() && valid_[it->second]) {
      Node& existing = nodes_[it->second];
      bool improve = config_.algorithm == SearchAlgorithm::kAStar &&
                     g < existing.g;
      if (!improve) continue;
      existing.g = g;
      existing.parent = id;
      existing.action = a;
      existing.depth = parent_depth + 1;
      existing.closed = false;
      push(it->second);
      continue;
    }
    auto h = heuristic(next);
    if (!h) continue;
    Node child;
    child.state = std::move(next);
    child.g = g;
    child.h = *h;
    child.parent = id;
    child.action = a;
    child.depth = parent_depth + 1;
    push(add_node(std::move(child)));
  }
}

void SearchEngine::remove_action(ActionId action) {
  removed_.insert(action);
  // 0 = unknown, 1 = valid, 2 = invalid. Re-parenting can point a node at a
  // newer one, so validity is resolved along explicit parent chains.
  std::vector<std::uint8_t> state(nodes_.size(), 0);
  std::vector<NodeId> chain;
  for (NodeId id = 0; id < nodes_.size(); ++id) {
    NodeId cur = id;
    while (state[cur] == 0 && nodes_[cur].parent) {
      chain.push_back(cur);
      cur = *nodes_[cur].parent;
    }
    std::uint8_t known = state[cur] != 0 ? state[cur] : 1;
    if (state[cur] == 0) state[cur] = known;
    while (!chain.empty()) {
      NodeId n = chain.back();
      chain.pop_back();
      known = (known == 1 && !removed_.contains(nodes_[n].action)) ? 1 : 2;
      state[n] = known;
    }
  }
  for (NodeId id = 0; id < nodes_.size(); ++id) valid_[id] = state[id] == 1;
}

std::vector<NodeId> SearchEngine::path_to(NodeId id) const {
  std::vector<NodeId> path;
  std::optional<NodeId> cur = id;
  while (cur) {
    path.push_back(*cur);
    cur = nodes_[*cur].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Plan SearchEngine::plan_to(NodeId id) const {
  Plan plan;
  auto path = path_to(id);
  for (std::size_t i = 1; i < path.size(); ++i) {
    plan.actions.push_back(nodes_[path[i]].action);
  }
  plan.total_cost = plan_cost(*task_, plan.actions);
  return plan;
}

SearchResult solve(const Task& task, const SearchConfig& config,
                   const RemovedSet& removed) {
  SearchEngine engine(task, config, removed);
  SearchResult result;
  while (auto id = engine.pop()) {
    if (engine.is_goal(*id)) {
      result.outcome = SearchOutcome::kPlan;
      result.plan = engine.plan_to(*id);
      result.expanded = engine.expanded();
      result.generated = engine.generated();
      return result;
    }
    if (engine.expanded() >= config.node_budget) {
      result.outcome = SearchOutcome::kBudgetExhausted;
      result.expanded = engine.expanded();
      result.generated = engine.generated();
      return result;
    }
    engine.expand(*id);
  }
  result.outcome = SearchOutcome::kUnsolvable;
  result.expanded = engine.expanded();
  result.generated = engine.generated();
  return result;
}

}  // namespace advplan
