#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "advplan/cost.hpp"
#include "advplan/strips.hpp"

namespace advplan {

struct Arc {
  int from = 0;
  int to = 0;
  std::int64_t cost = 0;

  bool operator==(const Arc&) const = default;
};

// Directed graph with a source and a sink; nodes are 0..nodes-1.
struct ArcGraph {
  int nodes = 0;
  int source = 0;
  int sink = 1;
  std::vector<Arc> arcs;

  // Throws kInvalidInput: source == sink, node out of range, negative cost,
  // self-loop.
  void validate() const;
  bool operator==(const ArcGraph&) const = default;
};

// Each undirected edge becomes a pair of opposite arcs.
ArcGraph from_undirected(int nodes, int source, int sink, const std::vector<Arc>& edges);

// "n s t" then one "u v cost" line per arc; '#' starts a comment.
ArcGraph parse_arc_list(std::string_view text);
std::string format_arc_list(const ArcGraph& g);
ArcGraph load_arc_list(const std::string& path);

// Dijkstra from source to sink, skipping arcs flagged in `removed`.
Cost shortest_path_cost(const ArcGraph& g, const std::vector<bool>& removed = {});

// One zero-parameter action O_i_j per arc, moving the token (Node ni) to
// (Node nj) at the arc's cost. Parallel arcs get a _2, _3, ... suffix.
std::string mvap_domain_pddl(const ArcGraph& g);
std::string mvap_problem_pddl(const ArcGraph& g);
Task mvap_to_strips(const ArcGraph& g);
// Grounded action of every arc, in arc order.
std::vector<ActionId> arc_actions(const Task& reduced, const ArcGraph& g);

struct DmvapAnswer {
  bool yes = false;
  std::vector<std::size_t> witness;  // arc indices; first k-subset reaching h
  Cost best_cost{0};                 // max over all k-subsets
  std::vector<std::size_t> best;     // first subset attaining best_cost
};

// Exhaustive over k-subsets (all arcs when there are fewer than k).
DmvapAnswer solve_dmvap_exhaustive(const ArcGraph& g, int k, Cost h,
                                   std::size_t max_subsets = 1'000'000);

}  // namespace advplan
