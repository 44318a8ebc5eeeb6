#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advplan/error.hpp"

namespace advplan {

// (row, col); row 0 is the top line of the ASCII rendering.
struct Cell {
  int row = 0;
  int col = 0;

  auto operator<=>(const Cell&) const = default;
  bool operator==(const Cell&) const = default;

  std::string to_string() const;
};

enum class GridHeuristic { kEuclidean, kManhattan };

std::string to_string(GridHeuristic heuristic);
GridHeuristic parse_grid_heuristic(std::string_view text);
double grid_heuristic(GridHeuristic kind, Cell cell, Cell goal);

// 4-connected unit-cost maze.
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, Cell start, Cell goal);

  int width() const { return width_; }
  int height() const { return height_; }
  Cell start() const { return start_; }
  Cell goal() const { return goal_; }

  bool in_bounds(Cell c) const {
    return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_;
  }
  // Out-of-bounds cells read as walls.
  bool is_wall(Cell c) const { return !in_bounds(c) || walls_[index(c)]; }
  bool is_free(Cell c) const { return !is_wall(c); }
  void set_wall(Cell c, bool wall = true);
  std::size_t wall_count() const;

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * width_ + c.col;
  }
  Cell cell(std::size_t index) const {
    return {static_cast<int>(index / width_), static_cast<int>(index % width_)};
  }
  std::size_t size() const { return walls_.size(); }

  // Free 4-neighbours in row-major order (up, left, right, down).
  std::vector<Cell> free_neighbors(Cell c) const;

  bool operator==(const Grid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  Cell start_;
  Cell goal_;
  std::vector<std::uint8_t> walls_;
};

// Up, left, right, down: the row-major order of a cell's neighbours.
inline constexpr Cell kGridMoves[4] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};

inline Cell operator+(Cell a, Cell b) { return {a.row + b.row, a.col + b.col}; }
inline Cell operator-(Cell a, Cell b) { return {a.row - b.row, a.col - b.col}; }

struct MazeSpec {
  int width = 15;
  int height = 15;
  double wall_frequency = 0.25;
  std::uint64_t seed = 0;
  int max_attempts = 100;
};

// Start is the top-left corner and goal the bottom-right one; every other
// cell is a wall independently with probability wall_frequency. Draws are
// repeated until the start reaches the goal, up to max_attempts times.
Grid generate_maze(const MazeSpec& spec);

// '#' wall, '.' free, 'S' start, 'G' goal; one newline-terminated line per
// row.
std::string format_maze(const Grid& grid);
Grid parse_maze(std::string_view text);

// Breadth-first shortest path length; nullopt when `to` is unreachable.
std::optional<int> shortest_path_length(const Grid& grid, Cell from, Cell to);
// A* from scratch with the given heuristic (both kinds are admissible here).
std::optional<int> astar_path_length(const Grid& grid, Cell from, Cell to,
                                     GridHeuristic heuristic);
// One shortest path, inclusive of both ends; empty when unreachable.
std::vector<Cell> shortest_path(const Grid& grid, Cell from, Cell to);

// Incremental replanning (Koenig & Likhachev's optimized D* Lite) searching
// backwards from the goal. The planner keeps its own copy of the walls it
// knows about; callers report new walls with notify_wall().
class DStarLite {
 public:
  DStarLite(const Grid& grid, Cell start,
            GridHeuristic heuristic = GridHeuristic::kEuclidean);

  // Next cell on a current shortest path, or nullopt when the goal is
  // unreachable. Among equally short continuations the lower heuristic
  // value wins, then row-major order.
  std::optional<Cell> next_move();
  void move_to(Cell cell);
  // Throws IllegalPlacement-category errors for the agent cell, the goal or
  // an already known wall.
  void notify_wall(Cell cell);

  std::optional<int> path_cost();
  std::vector<Cell> current_path();

  Cell position() const { return start_; }
  const Grid& known() const { return grid_; }
  std::size_t expansions() const { return expansions_; }

 private:
  using Key = std::pair<double, std::int64_t>;
  static constexpr std::int64_t kInf = INT64_MAX / 4;

  double h(Cell a, Cell b) const { return grid_heuristic(heuristic_, a, b); }
  Key calculate_key(std::size_t s) const;
  void update_vertex(std::size_t u);
  void recompute_rhs(std::size_t u);
  void compute_shortest_path();
  std::optional<Cell> best_successor(Cell from) const;

  Grid grid_;
  GridHeuristic heuristic_;
  Cell start_;
  Cell last_;
  double km_ = 0.0;
  std::vector<std::int64_t> g_;
  std::vector<std::int64_t> rhs_;
  std::vector<std::optional<Key>> queued_;
  std::set<std::pair<Key, std::size_t>> open_;
  std::size_t expansions_ = 0;
};

}  // namespace advplan
