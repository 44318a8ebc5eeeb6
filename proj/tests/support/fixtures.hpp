#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "advplan/strips.hpp"

namespace advplan::testing {

inline std::string data_path(const std::string& name) {
  return std::string(ADVPLAN_TEST_DATA) + "/" + name;
}

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name));
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string air_cargo_domain() { return read_data("air_cargo_domain.pddl"); }

// The two-plane, two-cargo swap problem with the given object block.
inline std::string air_cargo_problem(const std::string& objects,
                                     const std::string& init,
                                     const std::string& goal) {
  return "(define (problem p) (:domain air-cargo) (:objects " + objects +
         ") (:init " + init + ") (:goal (and " + goal + ")))";
}

inline Task two_cargo_task() {
  return ground_task(parse_task(air_cargo_domain(),
                                read_data("air_cargo_problem.pddl")));
}

// One plane, one cargo, two airports.
inline Task single_cargo_task() {
  return ground_task(parse_task(
      air_cargo_domain(),
      air_cargo_problem("p1 - plane c1 - cargo SFO JFK - airport",
                        "(At c1 SFO) (At p1 SFO)", "(At c1 JFK)")));
}

inline ActionId action(const Task& task, const std::string& name) {
  auto id = task.find_action(name);
  if (!id) throw std::runtime_error("no action " + name);
  return *id;
}

}  // namespace advplan::testing
