#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "advplan/cost.hpp"
#include "advplan/error.hpp"

namespace advplan {

using AtomId = std::uint32_t;
using ActionId = std::uint32_t;

// An atom such as (At c1 SFO). In action schemas the arguments may be
// variables, spelled with a leading '?'.
struct Predicate {
  std::string name;
  std::vector<std::string> args;

  auto operator<=>(const Predicate&) const = default;
  bool operator==(const Predicate&) const = default;

  std::string to_string() const;
};

struct TypedName {
  std::string name;
  std::string type;

  auto operator<=>(const TypedName&) const = default;
  bool operator==(const TypedName&) const = default;
};

struct PredicateSignature {
  std::string name;
  std::vector<TypedName> parameters;

  bool operator==(const PredicateSignature&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> parameters;
  std::vector<Predicate> preconditions;
  std::vector<Predicate> add_effects;
  std::vector<Predicate> del_effects;
  std::int64_t cost = 1;

  bool operator==(const ActionSchema&) const = default;
};

// A set of grounded atoms, stored as sorted unique ids into the owning task's
// atom table. Because atom ids follow the lexicographic order of the atoms'
// text, comparing two states lexicographically is the canonical state order.
class State {
 public:
  State() = default;
  explicit State(std::vector<AtomId> atoms);

  bool contains(AtomId atom) const;
  bool contains_all(std::span<const AtomId> atoms) const;
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const std::vector<AtomId>& atoms() const { return atoms_; }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;

 private:
  std::vector<AtomId> atoms_;
};

struct StateHash {
  std::size_t operator()(const State& state) const;
};

struct GroundedAction {
  std::string schema;
  // Objects bound to the schema's parameters, in parameter order.
  std::vector<std::string> binding;
  std::vector<AtomId> preconditions;
  std::vector<AtomId> add_effects;
  std::vector<AtomId> del_effects;
  Cost cost{1};

  // "(LOAD c1 p1 SFO)"
  std::string name() const;
};

struct Task {
  std::string domain_name;
  std::string problem_name;
  std::vector<std::string> requirements;
  // Declared types with their parent; the implicit root is "object".
  std::vector<TypedName> types;
  std::vector<TypedName> constants;
  std::vector<PredicateSignature> predicates;
  std::vector<ActionSchema> schemas;
  std::vector<TypedName> objects;
  std::vector<Predicate> init;  // sorted, unique
  std::vector<Predicate> goal;  // sorted, unique, conjunctive
  bool uses_action_costs = false;

  // Populated by ground_task().
  bool grounded = false;
  std::vector<Predicate> atoms;  // sorted; index is the AtomId
  State initial_state;
  std::vector<AtomId> goal_atoms;  // sorted
  std::vector<GroundedAction> operators;

  std::optional<AtomId> find_atom(const Predicate& atom) const;
  std::optional<ActionId> find_action(std::string_view name) const;
  std::string atom_name(AtomId atom) const { return atoms.at(atom).to_string(); }
  bool is_goal(const State& state) const {
    return state.contains_all(goal_atoms);
  }
  // Type name of a declared object or constant.
  std::optional<std::string> object_type(std::string_view object) const;
  bool is_constant(std::string_view object) const;
  // True when `type` equals `ancestor` or derives from it.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;

 private:
  friend Task ground_task(Task task);
  std::unordered_map<std::string, AtomId> atom_index_;
  std::unordered_map<std::string, ActionId> action_index_;
};

// Same domain and problem definition, ignoring any grounding.
bool same_definition(const Task& a, const Task& b);

struct Plan {
  std::vector<ActionId> actions;
  Cost total_cost{0};

  static Plan unsolvable() { return Plan{{}, Cost::infinite()}; }
  bool solved() const { return total_cost.is_finite(); }
};

// Parses the supported STRIPS subset (:strips, :typing, :action-costs).
Task parse_task(std::string_view domain_text, std::string_view problem_text);
Task load_task(const std::filesystem::path& domain_file,
               const std::filesystem::path& problem_file);

// One grounded action per schema and type-consistent binding, ordered by
// schema name and then lexicographically by binding.
Task ground_task(Task task);

class PreconditionViolation : public Error {
 public:
  PreconditionViolation(const std::string& action,
                        std::vector<std::string> missing);
  // Every precondition absent from the state, in canonical atom order.
  const std::vector<std::string>& missing() const { return missing_; }
  std::string missing_text() const;

 private:
  std::vector<std::string> missing_;
};

bool is_applicable(const State& state, const GroundedAction& action);
// (state \ del) U add, no precondition check.
State successor(const State& state, const GroundedAction& action);
// Checked transition; throws PreconditionViolation naming the missing
// preconditions.
State apply_action(const Task& task, const State& state,
                   const GroundedAction& action);

struct PlanValidation {
  bool valid = false;
  Cost cost{0};
  // 1-based index of the failing step; absent when the plan executes but
  // misses the goal, or when it is valid.
  std::optional<std::size_t> failed_step;
  std::string violation;
};

PlanValidation validate_plan(const Task& task, const Plan& plan);
Cost plan_cost(const Task& task, std::span<const ActionId> actions);

// One action per line, "(NAME obj1 obj2 ...)". Lines starting with ';' are
// ignored on input.
std::string format_plan(const Task& task, const Plan& plan);
Plan parse_plan(const Task& task, std::string_view text);

std::string format_domain(const Task& task);
std::string format_problem(const Task& task);
std::string format_state(const Task& task, const State& state);

}  // namespace advplan
