#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advplan/grid.hpp"
#include "advplan/planner.hpp"
#include "advplan/strips.hpp"

namespace advplan {

// --- grid windows ------------------------------------------------------------

// n×n occupancy view centred on the cell that receives the wall. Cells
// outside the maze read as walls. `approach` indexes kGridMoves and points
// from the centre towards the cell the agent arrives from.
struct GridWindow {
  int n = 3;
  std::vector<std::uint8_t> mask;  // row-major, 1 = wall; centre always 0
  std::optional<int> approach;

  bool wall(int r, int c) const { return mask[static_cast<std::size_t>(r) * n + c]; }
  bool operator==(const GridWindow&) const = default;
  // Rows joined by '/', centre written as 'X': "#.#/.X./..."
  std::string pattern() const;
};

GridWindow extract_grid_window(const Grid& grid, Cell center, int n = 3,
                               std::optional<Cell> came_from = std::nullopt);
GridWindow parse_grid_pattern(std::string_view pattern);

// Quarter turns clockwise; the approach direction turns with the mask.
GridWindow rotate(const GridWindow& w, int quarter_turns = 1);
// Mirror left-right.
GridWindow reflect(const GridWindow& w);

struct GridMatchOptions {
  bool reflections = false;
  bool match_approach = false;
};

// Transformation mapping b onto a: a == rotate(reflect?(b), quarter_turns).
struct GridWitness {
  int quarter_turns = 0;
  bool reflected = false;
};

std::optional<GridWitness> grid_windows_equivalent(const GridWindow& a,
                                                   const GridWindow& b,
                                                   GridMatchOptions options = {});
// Lexicographically smallest image under the allowed symmetries; the
// approach is dropped unless it takes part in matching.
GridWindow canonical_grid_window(const GridWindow& w, GridMatchOptions options = {});

// --- STRIPS windows ----------------------------------------------------------

// n states linked by n-1 actions; the adversarial change is the last action.
// Objects are recorded with their types so renamings stay type-consistent.
struct StripsWindow {
  std::vector<std::vector<Predicate>> states;  // each sorted, unique
  std::vector<Predicate> actions;              // (SCHEMA obj...)
  std::map<std::string, std::string> object_types;
  std::vector<std::string> constants;  // never renamed

  std::size_t size() const { return states.size(); }
  bool operator==(const StripsWindow&) const = default;
};

// The window whose last state is states[end_index]; the trajectory is
// states[0..m] with actions[i] leading from states[i] to states[i+1].
StripsWindow extract_strips_window(const Task& task,
                                   const std::vector<State>& states,
                                   const std::vector<ActionId>& actions,
                                   std::size_t end_index, int n = 4);

// Removes Δ, the atoms common to all states.
StripsWindow normalize_window(const StripsWindow& w);

// Objects renamed v1, v2, ... in first-occurrence order over the actions,
// then the states. For normalized windows every non-constant object occurs
// in some action, so equal canonical forms ⇔ equivalent windows.
StripsWindow canonical_strips_window(const StripsWindow& w);
std::string strips_window_key(const StripsWindow& canonical);

// Object renaming f with rename(a, f) == b, found by backtracking over
// type-consistent bijections.
using ObjectMap = std::map<std::string, std::string>;
std::optional<ObjectMap> strips_windows_equivalent(const StripsWindow& a,
                                                   const StripsWindow& b);
StripsWindow rename_objects(const StripsWindow& w, const ObjectMap& f);

// --- tables ------------------------------------------------------------------

enum class WindowFlavor { kGrid, kStrips };
std::string to_string(WindowFlavor flavor);

struct TableEntry {
  std::string key;
  std::int64_t count = 0;
  std::optional<GridWindow> grid;
  std::optional<StripsWindow> strips;

  bool operator==(const TableEntry&) const = default;
};

class WindowTable {
 public:
  WindowTable() = default;
  WindowTable(WindowFlavor flavor, int window_size, GridMatchOptions grid_options = {});

  WindowFlavor flavor() const { return flavor_; }
  int window_size() const { return window_size_; }
  const GridMatchOptions& grid_options() const { return grid_options_; }

  // Merges by equivalence; returns the entry's new count.
  std::int64_t add(const GridWindow& window, std::int64_t count = 1);
  std::int64_t add(const StripsWindow& normalized, std::int64_t count = 1);

  const TableEntry* find(const GridWindow& window) const;
  const TableEntry* find(const StripsWindow& normalized) const;
  const TableEntry* find_key(const std::string& key) const;

  // Drops entries with count < threshold; sorts by descending count, then key.
  WindowTable thresholded(std::int64_t threshold) const;
  void sort_entries();

  const std::vector<TableEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::int64_t total_count() const;

  std::map<std::string, std::string> metadata;

  bool operator==(const WindowTable&) const;

 private:
  WindowFlavor flavor_ = WindowFlavor::kGrid;
  int window_size_ = 3;
  GridMatchOptions grid_options_;
  std::vector<TableEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

// Versioned text format; parse(format(t)) == t and format(parse(s)) == s for
// any s produced by format.
std::string format_table(const WindowTable& table);
WindowTable parse_table(std::string_view text);
void save_table(const WindowTable& table, const std::string& path);
WindowTable load_table(const std::string& path);

// --- table construction --------------------------------------------------------

struct TableStats {
  std::size_t instances = 0;
  std::size_t adversarial = 0;   // best single change strictly raised cost
  std::size_t too_short = 0;     // change too early in the plan for a window
  std::size_t unsolved = 0;      // baseline unsolvable or over budget
};

struct GridTableSpec {
  std::size_t count = 500;
  MazeSpec maze;  // seed is the corpus base seed
  int n = 3;
  // Heuristic breaking ties in the simulated agent's path.
  GridHeuristic heuristic = GridHeuristic::kEuclidean;
  std::int64_t threshold = 0;
  GridMatchOptions options;
  unsigned workers = 1;
};

WindowTable build_grid_table(const GridTableSpec& spec, TableStats* stats = nullptr);

struct StripsTableSpec {
  std::size_t count = 200;
  int n = 4;
  SearchConfig planner = SearchConfig::breadth_first();
  std::int64_t threshold = 0;
  unsigned workers = 1;
};

using TaskGenerator = std::function<Task(std::size_t index)>;
WindowTable build_strips_table(const StripsTableSpec& spec,
                               const TaskGenerator& generator,
                               TableStats* stats = nullptr);

}  // namespace advplan
