#include "advplan/domains.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace advplan {

namespace {

constexpr const char* kAirports[] = {"SFO", "JFK", "LAX", "PHX", "PHL", "LAS",
                                     "ORD", "ATL", "SEA", "DEN", "BOS", "MIA"};

std::string airport_name(int i) {
  constexpr int n = sizeof(kAirports) / sizeof(kAirports[0]);
  return i < n ? kAirports[i] : "A" + std::to_string(i);
}

int uniform(std::mt19937_64& rng, int n) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

// Random partition of blocks into towers, bottom first.
std::vector<std::vector<int>> random_towers(std::mt19937_64& rng, int blocks) {
  std::vector<int> order(blocks);
  for (int i = 0; i < blocks; ++i) order[i] = i;
  for (int i = blocks - 1; i > 0; --i) std::swap(order[i], order[uniform(rng, i + 1)]);
  std::vector<std::vector<int>> towers;
  for (int b : order) {
    // Start a new tower with probability 1/3, or always for the first block.
    if (towers.empty() || uniform(rng, 3) == 0) towers.emplace_back();
    towers.back().push_back(b);
  }
  return towers;
}

std::string block(int i) { return "b" + std::to_string(i + 1); }

}  // namespace

std::string air_cargo_domain_pddl() {
  return R"((define (domain air-cargo)
  (:requirements :strips :typing)
  (:types cargo plane airport - object)
  (:predicates (At ?x - object ?a - airport)
               (In ?c - cargo ?p - plane))
  (:action LOAD
    :parameters (?c - cargo ?p - plane ?a - airport)
    :precondition (and (At ?c ?a) (At ?p ?a))
    :effect (and (In ?c ?p) (not (At ?c ?a))))
  (:action UNLOAD
    :parameters (?c - cargo ?p - plane ?a - airport)
    :precondition (and (In ?c ?p) (At ?p ?a))
    :effect (and (At ?c ?a) (not (In ?c ?p))))
  (:action FLY
    :parameters (?p - plane ?from - airport ?to - airport)
    :precondition (and (At ?p ?from))
    :effect (and (At ?p ?to) (not (At ?p ?from)))))
)";
}

std::string blocks_domain_pddl() {
  return R"((define (domain blocks)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (ontable ?x - block)
               (clear ?x - block) (handempty) (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action put-down
    :parameters (?x - block)
    :precondition (and (holding ?x))
    :effect (and (ontable ?x) (clear ?x) (handempty) (not (holding ?x))))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (handempty) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (handempty)))))
)";
}

std::string air_cargo_problem_pddl(const AirCargoSpec& spec) {
  if (spec.cargos < 1 || spec.planes < 1 || spec.airports < 2) {
    throw Error(ErrorCategory::kInvalidInput,
                "air cargo needs a cargo, a plane and two airports");
  }
  std::mt19937_64 rng(spec.seed);
  std::string objects, init, goal;
  for (int i = 0; i < spec.cargos; ++i) objects += "c" + std::to_string(i + 1) + " ";
  objects += "- cargo ";
  for (int i = 0; i < spec.planes; ++i) objects += "p" + std::to_string(i + 1) + " ";
  objects += "- plane ";
  for (int i = 0; i < spec.airports; ++i) objects += airport_name(i) + " ";
  objects += "- airport";
  for (int i = 0; i < spec.cargos; ++i) {
    int from = uniform(rng, spec.airports);
    int to = (from + 1 + uniform(rng, spec.airports - 1)) % spec.airports;
    std::string c = "c" + std::to_string(i + 1);
    init += " (At " + c + " " + airport_name(from) + ")";
    goal += " (At " + c + " " + airport_name(to) + ")";
  }
  for (int i = 0; i < spec.planes; ++i) {
    init += " (At p" + std::to_string(i + 1) + " " +
            airport_name(uniform(rng, spec.airports)) + ")";
  }
  return "(define (problem cargo-" + std::to_string(spec.seed) +
         ")\n  (:domain air-cargo)\n  (:objects " + objects + ")\n  (:init" + init +
         ")\n  (:goal (and" + goal + ")))\n";
}

Task generate_air_cargo(const AirCargoSpec& spec) {
  return ground_task(parse_task(air_cargo_domain_pddl(), air_cargo_problem_pddl(spec)));
}

std::string blocks_problem_pddl(const BlocksSpec& spec) {
  if (spec.blocks < 2) throw Error(ErrorCategory::kInvalidInput, "need two blocks");
  std::mt19937_64 rng(spec.seed);
  auto facts = [](const std::vector<std::vector<int>>& towers, bool with_clear) {
    std::string out;
    for (auto& t : towers) {
      out += " (ontable " + block(t.front()) + ")";
      for (std::size_t i = 1; i < t.size(); ++i) {
        out += " (on " + block(t[i]) + " " + block(t[i - 1]) + ")";
      }
      if (with_clear) out += " (clear " + block(t.back()) + ")";
    }
    return out;
  };
  auto start = random_towers(rng, spec.blocks);
  auto target = random_towers(rng, spec.blocks);
  while (target == start) target = random_towers(rng, spec.blocks);
  std::string objects;
  for (int i = 0; i < spec.blocks; ++i) objects += block(i) + " ";
  return "(define (problem blocks-" + std::to_string(spec.seed) +
         ")\n  (:domain blocks)\n  (:objects " + objects + "- block)\n  (:init (handempty)" +
         facts(start, true) + ")\n  (:goal (and" + facts(target, false) + ")))\n";
}

Task generate_blocks(const BlocksSpec& spec) {
  return ground_task(parse_task(blocks_domain_pddl(), blocks_problem_pddl(spec)));
}

}  // namespace advplan
