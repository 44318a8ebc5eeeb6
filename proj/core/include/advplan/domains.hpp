#pragma once

#include <cstdint>
#include <string>

#include "advplan/strips.hpp"

namespace advplan {

// Bundled generators for seeded STRIPS corpora. Generated tasks are parsed
// from PDDL text, so they exercise the same path as user-supplied files.

std::string air_cargo_domain_pddl();
std::string blocks_domain_pddl();

struct AirCargoSpec {
  int cargos = 2;
  int planes = 2;
  int airports = 3;
  std::uint64_t seed = 0;
};

// Cargo and planes start at uniformly drawn airports; every cargo must end
// at an airport other than its start.
std::string air_cargo_problem_pddl(const AirCargoSpec& spec);
Task generate_air_cargo(const AirCargoSpec& spec);

struct BlocksSpec {
  int blocks = 4;
  std::uint64_t seed = 0;
};

// Random initial and goal towers; the goal lists every on/ontable fact of
// the target arrangement.
std::string blocks_problem_pddl(const BlocksSpec& spec);
Task generate_blocks(const BlocksSpec& spec);

}  // namespace advplan
