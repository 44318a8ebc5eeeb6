#include "advplan/reduction.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

namespace advplan {

void ArcGraph::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCategory::kInvalidInput, m); };
  if (nodes < 2) fail("graph needs at least two nodes");
  auto in_range = [&](int v) { return v >= 0 && v < nodes; };
  if (!in_range(source) || !in_range(sink)) fail("source or sink out of range");
  if (source == sink) fail("source and sink coincide");
  for (const Arc& a : arcs) {
    std::string where = std::to_string(a.from) + "->" + std::to_string(a.to);
    if (!in_range(a.from) || !in_range(a.to)) fail("arc " + where + " leaves the graph");
    if (a.from == a.to) fail("self-loop " + where);
    if (a.cost < 0) fail("negative cost on " + where);
  }
}

ArcGraph from_undirected(int nodes, int source, int sink, const std::vector<Arc>& edges) {
  ArcGraph g{nodes, source, sink, {}};
  for (const Arc& e : edges) {
    g.arcs.push_back(e);
    g.arcs.push_back({e.to, e.from, e.cost});
  }
  g.validate();
  return g;
}

ArcGraph parse_arc_list(std::string_view text) {
  ArcGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 3) {
      throw ParseError("expected three fields, got " + std::to_string(tok.size()), line_no, 1);
    }
    std::int64_t v[3];
    for (int i = 0; i < 3; ++i) {
      std::size_t used = 0;
      try {
        v[i] = std::stoll(tok[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok[i].size()) throw ParseError("not an integer: " + tok[i], line_no, 1);
    }
    if (!header) {
      g.nodes = static_cast<int>(v[0]);
      g.source = static_cast<int>(v[1]);
      g.sink = static_cast<int>(v[2]);
      header = true;
    } else {
      g.arcs.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), v[2]});
    }
  }
  if (!header) throw ParseError("missing 'n s t' header", line_no, 1);
  g.validate();
  return g;
}

std::string format_arc_list(const ArcGraph& g) {
  std::string out = std::to_string(g.nodes) + " " + std::to_string(g.source) + " " +
                    std::to_string(g.sink) + "\n";
  for (const Arc& a : g.arcs) {
    out += std::to_string(a.from) + " " + std::to_string(a.to) + " " +
           std::to_string(a.cost) + "\n";
  }
  return out;
}

ArcGraph load_arc_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_arc_list(text.str());
}

Cost shortest_path_cost(const ArcGraph& g, const std::vector<bool>& removed) {
  std::vector<std::vector<std::size_t>> out(g.nodes);
  for (std::size_t i = 0; i < g.arcs.size(); ++i) {
    if (i < removed.size() && removed[i]) continue;
    out[g.arcs[i].from].push_back(i);
  }
  std::vector<Cost> dist(g.nodes, Cost::infinite());
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[g.source] = Cost(0);
  open.push({0, g.source});
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (Cost(d) > dist[u]) continue;
    if (u == g.sink) return dist[u];
    for (std::size_t i : out[u]) {
      const Arc& a = g.arcs[i];
      Cost nd = Cost(d) + Cost(a.cost);
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        open.push({nd.value(), a.to});
      }
    }
  }
  return dist[g.sink];
}

namespace {

std::string node(int v) { return "n" + std::to_string(v); }

std::vector<std::string> action_names(const ArcGraph& g) {
  std::map<std::pair<int, int>, int> seen;
  std::vector<std::string> names;
  for (const Arc& a : g.arcs) {
    int copy = ++seen[{a.from, a.to}];
    std::string name = "O_" + std::to_string(a.from) + "_" + std::to_string(a.to);
    if (copy > 1) name += "_" + std::to_string(copy);
    names.push_back(name);
  }
  return names;
}

}  // namespace

std::string mvap_domain_pddl(const ArcGraph& g) {
  g.validate();
  std::string out = "(define (domain mvap)\n  (:requirements :strips :action-costs)\n";
  out += "  (:constants";
  for (int v = 0; v < g.nodes; ++v) out += " " + node(v);
  out += ")\n  (:predicates (Node ?x))\n  (:functions (total-cost) - number)\n";
  auto names = action_names(g);
  for (std::size_t i = 0; i < g.arcs.size(); ++i) {
    const Arc& a = g.arcs[i];
    out += "  (:action " + names[i] + "\n    :parameters ()\n    :precondition (Node " +
           node(a.from) + ")\n    :effect (and (Node " + node(a.to) + ") (not (Node " +
           node(a.from) + ")) (increase (total-cost) " + std::to_string(a.cost) + ")))\n";
  }
  return out + ")\n";
}

std::string mvap_problem_pddl(const ArcGraph& g) {
  g.validate();
  return "(define (problem mvap-instance)\n  (:domain mvap)\n  (:init (Node " + node(g.source) +
         ") (= (total-cost) 0))\n  (:goal (Node " + node(g.sink) +
         "))\n  (:metric minimize (total-cost)))\n";
}

Task mvap_to_strips(const ArcGraph& g) {
  return ground_task(parse_task(mvap_domain_pddl(g), mvap_problem_pddl(g)));
}

std::vector<ActionId> arc_actions(const Task& reduced, const ArcGraph& g) {
  std::vector<ActionId> out;
  for (const auto& name : action_names(g)) {
    auto id = reduced.find_action("(" + name + ")");
    if (!id) throw Error(ErrorCategory::kInvalidInput, "task has no action " + name);
    out.push_back(*id);
  }
  return out;
}

DmvapAnswer solve_dmvap_exhaustive(const ArcGraph& g, int k, Cost h, std::size_t max_subsets) {
  g.validate();
  if (k < 0) throw Error(ErrorCategory::kInvalidInput, "negative k");
  const std::size_t m = g.arcs.size();
  const std::size_t size = std::min<std::size_t>(static_cast<std::size_t>(k), m);
  // C(m, size) without overflow past the bound.
  double subsets = 1;
  for (std::size_t i = 0; i < size; ++i) subsets = subsets * double(m - i) / double(i + 1);
  if (subsets > double(max_subsets)) {
    throw Error(ErrorCategory::kBoundExceeded,
                "C(" + std::to_string(m) + ", " + std::to_string(size) + ") subsets exceed " +
                    std::to_string(max_subsets));
  }
  DmvapAnswer answer;
  std::vector<std::size_t> pick(size);
  for (std::size_t i = 0; i < size; ++i) pick[i] = i;
  bool first = true;
  std::vector<bool> removed(m);
  while (true) {
    std::fill(removed.begin(), removed.end(), false);
    for (std::size_t i : pick) removed[i] = true;
    Cost c = shortest_path_cost(g, removed);
    if (first || c > answer.best_cost) {
      answer.best_cost = c;
      answer.best = pick;
    }
    if (!answer.yes && c >= h) {
      answer.yes = true;
      answer.witness = pick;
    }
    first = false;
    // Next combination in lexicographic order.
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == m - size + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
  return answer;
}

}  // namespace advplan
