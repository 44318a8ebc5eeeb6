#pragma once

// Random window generation for the equivalence properties: random walks in
// small air-cargo and blocks tasks, cut at random positions.

#include <random>
#include <vector>

#include "advplan/domains.hpp"
#include "advplan/planner.hpp"
#include "advplan/windows.hpp"

namespace advplan::testing {

struct Walk {
  std::vector<State> states;
  std::vector<ActionId> actions;
};

inline Walk random_walk(const Task& task, std::mt19937_64& rng, std::size_t steps) {
  Walk walk{{task.initial_state}, {}};
  SuccessorGenerator successors(task);
  std::vector<ActionId> applicable;
  for (std::size_t i = 0; i < steps; ++i) {
    successors.applicable(walk.states.back(), {}, applicable);
    if (applicable.empty()) break;
    ActionId a = applicable[rng() % applicable.size()];
    walk.actions.push_back(a);
    walk.states.push_back(successor(walk.states.back(), task.operators[a]));
  }
  return walk;
}

// Raw (un-normalized) windows of size n from seeded tasks.
inline std::vector<StripsWindow> random_strips_windows(std::size_t count, int n,
                                                       std::uint64_t seed) {
  std::vector<StripsWindow> out;
  std::mt19937_64 rng(seed);
  std::uint64_t task_seed = seed;
  while (out.size() < count) {
    Task task = (task_seed % 2)
                    ? generate_air_cargo({1 + int(task_seed % 3), 1 + int(task_seed % 2),
                                          2 + int(task_seed % 3), task_seed})
                    : generate_blocks({3 + int(task_seed % 3), task_seed});
    ++task_seed;
    Walk walk = random_walk(task, rng, 12);
    for (int k = 0; k < 5 && out.size() < count; ++k) {
      if (walk.actions.size() + 1 < std::size_t(n)) break;
      std::size_t end = n - 1 + rng() % (walk.states.size() - n + 1);
      out.push_back(extract_strips_window(task, walk.states, walk.actions, end, n));
    }
  }
  return out;
}

// A random bijection over the window's renamable objects, to fresh names.
inline ObjectMap random_renaming(const StripsWindow& w, std::mt19937_64& rng) {
  std::vector<std::string> names;
  for (auto& [o, t] : w.object_types) names.push_back(o);
  std::vector<std::string> targets;
  for (std::size_t i = 0; i < names.size(); ++i) targets.push_back("o" + std::to_string(rng() % 1000) + "_" + std::to_string(i));
  std::shuffle(targets.begin(), targets.end(), rng);
  ObjectMap f;
  for (std::size_t i = 0; i < names.size(); ++i) f[names[i]] = targets[i];
  return f;
}

}  // namespace advplan::testing
