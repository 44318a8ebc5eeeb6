#include "advplan/strips.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "sexpr.hpp"

namespace advplan {

Cost Cost::parse(const std::string& text) {
  if (text == "inf") return infinite();
  std::size_t used = 0;
  long long value = std::stoll(text, &used);
  if (used != text.size() || value < 0) {
    throw std::invalid_argument("bad cost: " + text);
  }
  return Cost(value);
}

std::string Predicate::to_string() const {
  std::string out = "(" + name;
  for (auto& arg : args) out += " " + arg;
  return out + ")";
}

State::State(std::vector<AtomId> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool State::contains(AtomId atom) const {
  return std::binary_search(atoms_.begin(), atoms_.end(), atom);
}

bool State::contains_all(std::span<const AtomId> atoms) const {
  // Both ranges are sorted.
  return std::includes(atoms_.begin(), atoms_.end(), atoms.begin(),
                       atoms.end());
}

std::size_t StateHash::operator()(const State& state) const {
  std::size_t seed = state.size();
  for (AtomId a : state) {
    seed ^= a + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  }
  return seed;
}

std::string GroundedAction::name() const {
  std::string out = "(" + schema;
  for (auto& obj : binding) out += " " + obj;
  return out + ")";
}

std::optional<AtomId> Task::find_atom(const Predicate& atom) const {
  auto it = atom_index_.find(atom.to_string());
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActionId> Task::find_action(std::string_view name) const {
  auto it = action_index_.find(std::string(name));
  if (it == action_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Task::object_type(std::string_view object) const {
  for (auto& o : objects) {
    if (o.name == object) return o.type;
  }
  for (auto& c : constants) {
    if (c.name == object) return c.type;
  }
  return std::nullopt;
}

bool Task::is_constant(std::string_view object) const {
  return std::any_of(constants.begin(), constants.end(),
                     [&](const TypedName& c) { return c.name == object; });
}

bool Task::is_subtype(std::string_view type, std::string_view ancestor) const {
  std::string current(type);
  // Bounded walk up the hierarchy guards against cyclic declarations.
  for (std::size_t depth = 0; depth <= types.size() + 1; ++depth) {
    if (current == ancestor) return true;
    if (current == "object") return false;
    auto it = std::find_if(types.begin(), types.end(),
                           [&](const TypedName& t) { return t.name == current; });
    if (it == types.end()) return false;
    current = it->type;
  }
  return false;
}

bool same_definition(const Task& a, const Task& b) {
  return a.domain_name == b.domain_name && a.problem_name == b.problem_name &&
         a.requirements == b.requirements && a.types == b.types &&
         a.constants == b.constants && a.predicates == b.predicates &&
         a.schemas == b.schemas && a.objects == b.objects && a.init == b.init &&
         a.goal == b.goal && a.uses_action_costs == b.uses_action_costs;
}

namespace {

Predicate substitute(const Predicate& pattern,
                     const std::map<std::string, std::string>& binding) {
  Predicate out{pattern.name, {}};
  out.args.reserve(pattern.args.size());
  for (auto& arg : pattern.args) {
    auto it = binding.find(arg);
    out.args.push_back(it == binding.end() ? arg : it->second);
  }
  return out;
}

struct PendingAction {
  std::string schema;
  std::vector<std::string> binding;
  std::vector<Predicate> pre, add, del;
  std::int64_t cost;
};

}  // namespace

Task ground_task(Task task) {
  std::vector<TypedName> pool = task.objects;
  pool.insert(pool.end(), task.constants.begin(), task.constants.end());
  std::sort(pool.begin(), pool.end());

  std::vector<const ActionSchema*> schemas;
  for (auto& s : task.schemas) schemas.push_back(&s);
  std::sort(schemas.begin(), schemas.end(),
            [](auto* a, auto* b) { return a->name < b->name; });

  std::vector<PendingAction> pending;
  for (const ActionSchema* schema : schemas) {
    std::vector<std::vector<std::string>> domains;
    for (auto& param : schema->parameters) {
      std::vector<std::string> candidates;
      for (auto& obj : pool) {
        if (task.is_subtype(obj.type, param.type)) candidates.push_back(obj.name);
      }
      domains.push_back(std::move(candidates));
    }
    bool empty = std::any_of(domains.begin(), domains.end(),
                             [](auto& d) { return d.empty(); });
    if (empty) continue;
    std::vector<std::size_t> index(domains.size(), 0);
    while (true) {
      std::map<std::string, std::string> binding;
      PendingAction action{schema->name, {}, {}, {}, {}, schema->cost};
      for (std::size_t i = 0; i < domains.size(); ++i) {
        binding[schema->parameters[i].name] = domains[i][index[i]];
        action.binding.push_back(domains[i][index[i]]);
      }
      for (auto& p : schema->preconditions) action.pre.push_back(substitute(p, binding));
      for (auto& p : schema->add_effects) action.add.push_back(substitute(p, binding));
      for (auto& p : schema->del_effects) action.del.push_back(substitute(p, binding));
      pending.push_back(std::move(action));
      // Odometer increment, last parameter fastest.
      bool exhausted = true;
      for (std::size_t pos = domains.size(); pos-- > 0;) {
        if (++index[pos] < domains[pos].size()) {
          exhausted = false;
          break;
        }
        index[pos] = 0;
      }
      if (exhausted) break;
    }
  }

  std::vector<Predicate> atoms = task.init;
  atoms.insert(atoms.end(), task.goal.begin(), task.goal.end());
  for (auto& a : pending) {
    atoms.insert(atoms.end(), a.pre.begin(), a.pre.end());
    atoms.insert(atoms.end(), a.add.begin(), a.add.end());
    atoms.insert(atoms.end(), a.del.begin(), a.del.end());
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());

  task.atoms = std::move(atoms);
  task.atom_index_.clear();
  for (AtomId i = 0; i < task.atoms.size(); ++i) {
    task.atom_index_.emplace(task.atoms[i].to_string(), i);
  }
  auto ids = [&](const std::vector<Predicate>& preds) {
    std::vector<AtomId> out;
    out.reserve(preds.size());
    for (auto& p : preds) out.push_back(task.atom_index_.at(p.to_string()));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  task.initial_state = State(ids(task.init));
  task.goal_atoms = ids(task.goal);
  task.operators.clear();
  task.action_index_.clear();
  task.operators.reserve(pending.size());
  for (auto& p : pending) {
    GroundedAction action;
    action.schema = p.schema;
    action.binding = std::move(p.binding);
    action.preconditions = ids(p.pre);
    action.add_effects = ids(p.add);
    action.del_effects = ids(p.del);
    action.cost = Cost(p.cost);
    task.action_index_.emplace(action.name(),
                               static_cast<ActionId>(task.operators.size()));
    task.operators.push_back(std::move(action));
  }
  task.grounded = true;
  return task;
}

bool is_applicable(const State& state, const GroundedAction& action) {
  return state.contains_all(action.preconditions);
}

State successor(const State& state, const GroundedAction& action) {
  std::vector<AtomId> out;
  out.reserve(state.size() + action.add_effects.size());
  std::set_difference(state.begin(), state.end(), action.del_effects.begin(),
                      action.del_effects.end(), std::back_inserter(out));
  std::vector<AtomId> merged;
  merged.reserve(out.size() + action.add_effects.size());
  std::set_union(out.begin(), out.end(), action.add_effects.begin(),
                 action.add_effects.end(), std::back_inserter(merged));
  return State(std::move(merged));
}

PreconditionViolation::PreconditionViolation(const std::string& action,
                                             std::vector<std::string> missing)
    : Error(ErrorCategory::kPrecondition, ""), missing_(std::move(missing)) {
  static_cast<std::runtime_error&>(*this) = std::runtime_error(
      action + " requires " + missing_text() + " which does not hold");
}

std::string PreconditionViolation::missing_text() const {
  std::string out;
  for (auto& m : missing_) out += (out.empty() ? "" : " ") + m;
  return out;
}

State apply_action(const Task& task, const State& state,
                   const GroundedAction& action) {
  std::vector<std::string> missing;
  for (AtomId pre : action.preconditions) {
    if (!state.contains(pre)) missing.push_back(task.atom_name(pre));
  }
  if (!missing.empty()) throw PreconditionViolation(action.name(), missing);
  return successor(state, action);
}

Cost plan_cost(const Task& task, std::span<const ActionId> actions) {
  Cost total{0};
  for (ActionId id : actions) total += task.operators.at(id).cost;
  return total;
}

PlanValidation validate_plan(const Task& task, const Plan& plan) {
  PlanValidation result;
  State state = task.initial_state;
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    if (plan.actions[i] >= task.operators.size()) {
      result.failed_step = i + 1;
      result.violation = "step " + std::to_string(i + 1) + ": unknown action";
      return result;
    }
    const GroundedAction& action = task.operators[plan.actions[i]];
    try {
      state = apply_action(task, state, action);
    } catch (const PreconditionViolation& e) {
      result.failed_step = i + 1;
      result.violation = "step " + std::to_string(i + 1) + ": " +
                         action.name() + " requires " + e.missing_text();
      return result;
    }
  }
  if (!task.is_goal(state)) {
    for (AtomId g : task.goal_atoms) {
      if (!state.contains(g)) {
        result.violation = "goal not reached: " + task.atom_name(g) + " missing";
        return result;
      }
    }
  }
  result.valid = true;
  result.cost = plan_cost(task, plan.actions);
  return result;
}

std::string format_plan(const Task& task, const Plan& plan) {
  std::string out;
  for (ActionId id : plan.actions) out += task.operators.at(id).name() + "\n";
  return out;
}

Plan parse_plan(const Task& task, std::string_view text) {
  Plan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == ';') continue;
    detail::SExpr expr;
    try {
      expr = detail::parse_single_sexpr(line);
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_no, e.column());
    }
    if (!expr.is_list || expr.items.empty()) {
      throw ParseError("expected (NAME args...)", line_no, 1);
    }
    std::string name = "(";
    for (std::size_t i = 0; i < expr.items.size(); ++i) {
      if (!expr.items[i].is_atom()) {
        throw ParseError("nested list in plan step", line_no, 1);
      }
      if (i > 0) name += " ";
      name += expr.items[i].atom;
    }
    name += ")";
    auto id = task.find_action(name);
    if (!id) {
      throw Error(ErrorCategory::kInvalidInput,
                  "line " + std::to_string(line_no) + ": unknown action " + name);
    }
    plan.actions.push_back(*id);
  }
  plan.total_cost = plan_cost(task, plan.actions);
  return plan;
}

namespace {

std::string typed_list(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += " ";
    out += names[i].name + " - " + names[i].type;
  }
  return out;
}

std::string conjunction(const std::vector<Predicate>& atoms) {
  std::string out = "(and";
  for (auto& a : atoms) out += " " + a.to_string();
  return out + ")";
}

}  // namespace

std::string format_domain(const Task& task) {
  std::ostringstream out;
  out << "(define (domain " << task.domain_name << ")\n";
  if (!task.requirements.empty()) {
    out << "  (:requirements";
    for (auto& r : task.requirements) out << " " << r;
    out << ")\n";
  }
  if (!task.types.empty()) out << "  (:types " << typed_list(task.types) << ")\n";
  if (!task.constants.empty()) {
    out << "  (:constants " << typed_list(task.constants) << ")\n";
  }
  if (!task.predicates.empty()) {
    out << "  (:predicates";
    for (auto& p : task.predicates) {
      out << " (" << p.name;
      if (!p.parameters.empty()) out << " " << typed_list(p.parameters);
      out << ")";
    }
    out << ")\n";
  }
  if (task.uses_action_costs) out << "  (:functions (total-cost) - number)\n";
  for (auto& s : task.schemas) {
    out << "  (:action " << s.name << "\n";
    out << "    :parameters (" << typed_list(s.parameters) << ")\n";
    out << "    :precondition " << conjunction(s.preconditions) << "\n";
    out << "    :effect (and";
    for (auto& a : s.add_effects) out << " " << a.to_string();
    for (auto& d : s.del_effects) out << " (not " << d.to_string() << ")";
    if (task.uses_action_costs) out << " (increase (total-cost) " << s.cost << ")";
    out << "))\n";
  }
  out << ")\n";
  return out.str();
}

std::string format_problem(const Task& task) {
  std::ostringstream out;
  out << "(define (problem " << task.problem_name << ")\n";
  out << "  (:domain " << task.domain_name << ")\n";
  out << "  (:objects " << typed_list(task.objects) << ")\n";
  out << "  (:init";
  for (auto& a : task.init) out << " " << a.to_string();
  if (task.uses_action_costs) out << " (= (total-cost) 0)";
  out << ")\n";
  out << "  (:goal " << conjunction(task.goal) << ")\n";
  if (task.uses_action_costs) out << "  (:metric minimize (total-cost))\n";
  out << ")\n";
  return out.str();
}

std::string format_state(const Task& task, const State& state) {
  std::string out = "{";
  bool first = true;
  for (AtomId a : state) {
    if (!first) out += " ";
    out += task.atom_name(a);
    first = false;
  }
  return out + "}";
}

}  // namespace advplan
