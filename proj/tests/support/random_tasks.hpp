#pragma once

#include <random>
#include <string>

#include "advplan/strips.hpp"

namespace advplan::testing {

struct RandomTaskParams {
  int atoms = 7;
  int actions = 12;
  int max_cost = 1;  // 1 gives unit-cost tasks
};

// Propositional task over atoms (q0)..(qN-1) with zero-parameter actions.
// Small enough that every reachable state can be enumerated.
inline Task random_task(std::uint64_t seed, RandomTaskParams params = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto atom = [](int i) { return "(q" + std::to_string(i) + ")"; };
  bool costs = params.max_cost > 1;
  std::string domain = "(define (domain rnd) (:requirements :strips";
  domain += costs ? " :action-costs)" : ")";
  domain += " (:predicates";
  for (int i = 0; i < params.atoms; ++i) domain += " " + atom(i);
  domain += ")";
  if (costs) domain += " (:functions (total-cost) - number)";
  for (int a = 0; a < params.actions; ++a) {
    int pre_a = pick(params.atoms);
    int pre_b = pick(params.atoms);
    int add_a = pick(params.atoms);
    int add_b = pick(params.atoms);
    int del = pick(params.atoms);
    domain += " (:action a" + std::to_string(a) + " :parameters () :precondition (and " +
              atom(pre_a) + (pick(2) ? " " + atom(pre_b) : std::string()) +
              ") :effect (and " + atom(add_a) +
              (pick(2) ? " " + atom(add_b) : std::string());
    if (del != add_a && del != add_b && pick(3) != 0) {
      domain += " (not " + atom(del) + ")";
    }
    if (costs) {
      domain += " (increase (total-cost) " +
                std::to_string(1 + pick(params.max_cost)) + ")";
    }
    domain += "))";
  }
  domain += ")";
  std::string problem = "(define (problem r) (:domain rnd) (:init";
  for (int i = 0; i < params.atoms; ++i) {
    if (i == 0 || pick(4) == 0) problem += " " + atom(i);
  }
  if (costs) problem += " (= (total-cost) 0)";
  int g1 = 1 + pick(params.atoms - 1);
  int g2 = 1 + pick(params.atoms - 1);
  problem += ") (:goal (and " + atom(g1) + " " + atom(g2) + ")))";
  return ground_task(parse_task(domain, problem));
}

}  // namespace advplan::testing
