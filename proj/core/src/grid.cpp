#include "advplan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <random>

#include "sexpr.hpp"

namespace advplan {

std::string Cell::to_string() const {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

std::string to_string(GridHeuristic heuristic) {
  return heuristic == GridHeuristic::kEuclidean ? "euclidean" : "manhattan";
}

GridHeuristic parse_grid_heuristic(std::string_view text) {
  std::string t = detail::to_lower(text);
  if (t == "euclidean") return GridHeuristic::kEuclidean;
  if (t == "manhattan") return GridHeuristic::kManhattan;
  throw Error(ErrorCategory::kUsage, "unknown grid heuristic: " + t);
}

double grid_heuristic(GridHeuristic kind, Cell cell, Cell goal) {
  double dr = cell.row - goal.row;
  double dc = cell.col - goal.col;
  if (kind == GridHeuristic::kManhattan) return std::abs(dr) + std::abs(dc);
  return std::sqrt(dr * dr + dc * dc);
}

Grid::Grid(int width, int height, Cell start, Cell goal)
    : width_(width), height_(height), start_(start), goal_(goal) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCategory::kInvalidInput, "grid dimensions must be positive");
  }
  if (!in_bounds(start) || !in_bounds(goal)) {
    throw Error(ErrorCategory::kInvalidInput, "start or goal out of bounds");
  }
  walls_.assign(static_cast<std::size_t>(width) * height, 0);
}

void Grid::set_wall(Cell c, bool wall) {
  if (!in_bounds(c)) {
    throw Error(ErrorCategory::kIllegalPlacement, "cell out of bounds: " + c.to_string());
  }
  if (wall && (c == start_ || c == goal_)) {
    throw Error(ErrorCategory::kIllegalPlacement,
                "start and goal cannot be walls: " + c.to_string());
  }
  walls_[index(c)] = wall;
}

std::size_t Grid::wall_count() const {
  return static_cast<std::size_t>(std::count(walls_.begin(), walls_.end(), 1));
}

std::vector<Cell> Grid::free_neighbors(Cell c) const {
  std::vector<Cell> out;
  for (Cell d : kGridMoves) {
    if (is_free(c + d)) out.push_back(c + d);
  }
  return out;
}

Grid generate_maze(const MazeSpec& spec) {
  if (!(spec.wall_frequency >= 0.0 && spec.wall_frequency < 1.0)) {
    throw Error(ErrorCategory::kInvalidInput, "wall frequency must lie in [0, 1)");
  }
  if (spec.width * spec.height < 2) {
    throw Error(ErrorCategory::kInvalidInput, "maze needs at least two cells");
  }
  if (spec.max_attempts <= 0) {
    throw Error(ErrorCategory::kInvalidInput, "max_attempts must be positive");
  }
  std::mt19937_64 rng(spec.seed);
  Cell start{0, 0};
  Cell goal{spec.height - 1, spec.width - 1};
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Grid grid(spec.width, spec.height, start, goal);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Cell c = grid.cell(i);
      // 53-bit uniform draw in [0, 1); drawn for every cell, start and goal
      // included, so the stream layout does not depend on their position.
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (c != start && c != goal && u < spec.wall_frequency) grid.set_wall(c);
    }
    if (shortest_path_length(grid, start, goal)) return grid;
  }
  throw Error(ErrorCategory::kGaveUp,
              "no solvable maze after " + std::to_string(spec.max_attempts) +
                  " attempts");
}

std::string format_maze(const Grid& grid) {
  std::string out;
  out.reserve(grid.size() + grid.height());
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      Cell cell{r, c};
      if (cell == grid.start()) out += 'S';
      else if (cell == grid.goal()) out += 'G';
      else out += grid.is_wall(cell) ? '#' : '.';
    }
    out += '\n';
  }
  return out;
}

Grid parse_maze(std::string_view text) {
  std::vector<std::string> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string row(text.substr(pos, end - pos));
    if (!row.empty() && row.back() == '\r') row.pop_back();
    rows.push_back(std::move(row));
    pos = end + 1;
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw ParseError("empty maze", 1, 1);

  std::optional<Cell> start, goal;
  const int width = static_cast<int>(rows.front().size());
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    if (static_cast<int>(rows[r].size()) != width) {
      throw ParseError("row width " + std::to_string(rows[r].size()) +
                           " differs from " + std::to_string(width),
                       r + 1, 1);
    }
    for (int c = 0; c < width; ++c) {
      char ch = rows[r][c];
      if (ch == 'S' || ch == 'G') {
        auto& slot = ch == 'S' ? start : goal;
        if (slot) throw ParseError(std::string("duplicate ") + ch, r + 1, c + 1);
        slot = Cell{r, c};
      } else if (ch != '#' && ch != '.') {
        throw ParseError(std::string("unexpected character '") + ch + "'", r + 1,
                         c + 1);
      }
    }
  }
  if (!start || !goal) {
    throw ParseError(start ? "missing goal G" : "missing start S", 1, 1);
  }
  Grid grid(width, static_cast<int>(rows.size()), *start, *goal);
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < width; ++c) {
      if (rows[r][c] == '#') grid.set_wall({r, c});
    }
  }
  return grid;
}

namespace {

std::vector<int> bfs_distances(const Grid& grid, Cell from) {
  std::vector<int> dist(grid.size(), -1);
  if (grid.is_wall(from)) return dist;
  std::deque<Cell> queue{from};
  dist[grid.index(from)] = 0;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    for (Cell n : grid.free_neighbors(c)) {
      if (dist[grid.index(n)] >= 0) continue;
      dist[grid.index(n)] = dist[grid.index(c)] + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

}  // namespace

std::optional<int> shortest_path_length(const Grid& grid, Cell from, Cell to) {
  if (!grid.in_bounds(to)) return std::nullopt;
  int d = bfs_distances(grid, from)[grid.index(to)];
  if (d < 0) return std::nullopt;
  return d;
}

std::vector<Cell> shortest_path(const Grid& grid, Cell from, Cell to) {
  if (!grid.in_bounds(to) || grid.is_wall(to)) return {};
  // Distances from the target, then walk downhill from the source.
  auto dist = bfs_distances(grid, to);
  if (!grid.in_bounds(from) || dist[grid.index(from)] < 0) return {};
  std::vector<Cell> path{from};
  Cell c = from;
  while (c != to) {
    for (Cell n : grid.free_neighbors(c)) {
      if (dist[grid.index(n)] == dist[grid.index(c)] - 1) {
        c = n;
        break;
      }
    }
    path.push_back(c);
  }
  return path;
}

std::optional<int> astar_path_length(const Grid& grid, Cell from, Cell to,
                                     GridHeuristic heuristic) {
  if (grid.is_wall(from) || grid.is_wall(to)) return std::nullopt;
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<int> g(grid.size(), INT32_MAX);
  std::vector<bool> closed(grid.size(), false);
  g[grid.index(from)] = 0;
  open.push({grid_heuristic(heuristic, from, to), grid.index(from)});
  while (!open.empty()) {
    auto [f, i] = open.top();
    open.pop();
    if (closed[i]) continue;
    closed[i] = true;
    Cell c = grid.cell(i);
    if (c == to) return g[i];
    for (Cell n : grid.free_neighbors(c)) {
      std::size_t j = grid.index(n);
      if (g[i] + 1 < g[j]) {
        g[j] = g[i] + 1;
        open.push({g[j] + grid_heuristic(heuristic, n, to), j});
      }
    }
  }
  return std::nullopt;
}

// --- D* Lite ---------------------------------------------------------------

DStarLite::DStarLite(const Grid& grid, Cell start, GridHeuristic heuristic)
    : grid_(grid), heuristic_(heuristic), start_(start), last_(start) {
  if (grid_.is_wall(start)) {
    throw Error(ErrorCategory::kInvalidInput, "agent starts inside a wall");
  }
  g_.assign(grid_.size(), kInf);
  rhs_.assign(grid_.size(), kInf);
  queued_.assign(grid_.size(), std::nullopt);
  std::size_t goal = grid_.index(grid_.goal());
  rhs_[goal] = 0;
  Key key = calculate_key(goal);
  queued_[goal] = key;
  open_.insert({key, goal});
}

DStarLite::Key DStarLite::calculate_key(std::size_t s) const {
  std::int64_t m = std::min(g_[s], rhs_[s]);
  if (m >= kInf) return {INFINITY, kInf};
  return {static_cast<double>(m) + h(start_, grid_.cell(s)) + km_, m};
}

void DStarLite::update_vertex(std::size_t u) {
  if (queued_[u]) {
    open_.erase({*queued_[u], u});
    queued_[u].reset();
  }
  if (g_[u] != rhs_[u]) {
    Key key = calculate_key(u);
    queued_[u] = key;
    open_.insert({key, u});
  }
}

void DStarLite::recompute_rhs(std::size_t u) {
  Cell c = grid_.cell(u);
  if (c == grid_.goal()) return;
  std::int64_t best = kInf;
  if (grid_.is_free(c)) {
    for (Cell n : grid_.free_neighbors(c)) {
      best = std::min(best, g_[grid_.index(n)] + 1);
    }
  }
  rhs_[u] = std::min(best, kInf);
}

void DStarLite::compute_shortest_path() {
  std::size_t s = grid_.index(start_);
  while (!open_.empty() &&
         (open_.begin()->first < calculate_key(s) || rhs_[s] > g_[s])) {
    auto [k_old, u] = *open_.begin();
    Key k_new = calculate_key(u);
    ++expansions_;
    if (k_old < k_new) {
      open_.erase(open_.begin());
      queued_[u] = k_new;
      open_.insert({k_new, u});
    } else if (g_[u] > rhs_[u]) {
      g_[u] = rhs_[u];
      open_.erase(open_.begin());
      queued_[u].reset();
      for (Cell p : grid_.free_neighbors(grid_.cell(u))) {
        std::size_t pi = grid_.index(p);
        if (p != grid_.goal()) rhs_[pi] = std::min(rhs_[pi], g_[u] + 1);
        update_vertex(pi);
      }
    } else {
      std::int64_t g_old = g_[u];
      g_[u] = kInf;
      auto preds = grid_.free_neighbors(grid_.cell(u));
      preds.push_back(grid_.cell(u));
      for (Cell p : preds) {
        std::size_t pi = grid_.index(p);
        bool via_u = pi == u ? false : rhs_[pi] == g_old + 1;
        if (pi == u || via_u) recompute_rhs(pi);
        update_vertex(pi);
      }
    }
  }
}

std::optional<int> DStarLite::path_cost() {
  compute_shortest_path();
  std::int64_t cost = rhs_[grid_.index(start_)];
  if (cost >= kInf) return std::nullopt;
  return static_cast<int>(cost);
}

std::optional<Cell> DStarLite::best_successor(Cell from) const {
  std::optional<Cell> best;
  std::int64_t best_g = kInf;
  double best_h = 0;
  for (Cell n : grid_.free_neighbors(from)) {
    std::int64_t gn = g_[grid_.index(n)];
    if (gn >= kInf) continue;
    double hn = h(n, grid_.goal());
    // Strict comparisons keep the first (row-major) of exact ties.
    if (!best || gn < best_g || (gn == best_g && hn < best_h)) {
      best = n;
      best_g = gn;
      best_h = hn;
    }
  }
  return best;
}

std::optional<Cell> DStarLite::next_move() {
  if (!path_cost() || start_ == grid_.goal()) return std::nullopt;
  return best_successor(start_);
}

void DStarLite::move_to(Cell cell) {
  if (grid_.is_wall(cell)) {
    throw Error(ErrorCategory::kInvalidInput,
                "agent cannot move into a wall at " + cell.to_string());
  }
  start_ = cell;
}

void DStarLite::notify_wall(Cell cell) {
  if (!grid_.in_bounds(cell)) {
    throw Error(ErrorCategory::kIllegalPlacement, "cell out of bounds: " + cell.to_string());
  }
  if (cell == start_) {
    throw Error(ErrorCategory::kIllegalPlacement, "wall on the agent at " + cell.to_string());
  }
  if (cell == grid_.goal()) {
    throw Error(ErrorCategory::kIllegalPlacement, "wall on the goal at " + cell.to_string());
  }
  if (grid_.is_wall(cell)) {
    throw Error(ErrorCategory::kIllegalPlacement, "duplicate wall at " + cell.to_string());
  }
  km_ += h(last_, start_);
  last_ = start_;
  // Every edge touching `cell` becomes infinite. Recomputing rhs from
  // scratch for the affected vertices covers both edge directions.
  auto neighbors = grid_.free_neighbors(cell);
  grid_.set_wall(cell);
  std::size_t w = grid_.index(cell);
  recompute_rhs(w);
  update_vertex(w);
  for (Cell n : neighbors) {
    std::size_t ni = grid_.index(n);
    if (rhs_[ni] == g_[w] + 1) recompute_rhs(ni);
    update_vertex(ni);
  }
}

std::vector<Cell> DStarLite::current_path() {
  std::vector<Cell> path;
  auto cost = path_cost();
  if (!cost) return path;
  // After compute_shortest_path the g-values along the greedy descent are
  // exact, so no further search is needed.
  Cell c = start_;
  path.push_back(c);
  while (c != grid_.goal() && static_cast<int>(path.size()) <= *cost) {
    auto next = best_successor(c);
    if (!next) break;
    c = *next;
    path.push_back(c);
  }
  return path;
}

}  // namespace advplan
