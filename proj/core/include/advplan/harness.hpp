#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "advplan/attacks.hpp"
#include "advplan/domains.hpp"
#include "advplan/grid.hpp"
#include "advplan/planner.hpp"
#include "advplan/windows.hpp"

namespace advplan {

// "bfs", "astar+zero", "gbfs+additive", "astar+goal-count", ...
SearchConfig parse_search_config(std::string_view text);

// Table settings for one threat model.
struct TableSettings {
  std::int64_t threshold = 0;
  GridHeuristic heuristic = GridHeuristic::kEuclidean;  // grid tables
  std::string path;  // load instead of building when set

  bool operator==(const TableSettings&) const = default;
};

struct ExperimentConfig {
  std::string flavor = "grid";  // grid | strips
  std::string domain = "air-cargo";  // strips corpora: air-cargo | blocks
  std::size_t count = 200;
  std::uint64_t seed = 42;

  MazeSpec maze;  // seed unused; instance i gets derive_seed(seed, i)
  AirCargoSpec cargo;
  BlocksSpec blocks;

  // Table corpus: separate seed, instance count and object counts.
  std::size_t table_count = 500;
  std::uint64_t table_seed = 1000;
  int window = 0;  // 0: 3 for grids, 4 for STRIPS
  GridMatchOptions match;
  AirCargoSpec table_cargo{1, 1, 3, 0};
  BlocksSpec table_blocks{3, 0};
  // table.* keys set the default; "<threat>.threshold" and friends
  // override it for one threat model.
  TableSettings table_default;
  std::map<std::string, TableSettings> tables;

  std::vector<std::string> threats;  // "online-informed", ...
  std::vector<int> budgets{1, 2};

  GridHeuristic agent_heuristic = GridHeuristic::kEuclidean;
  SearchConfig agent = SearchConfig::breadth_first();
  SearchConfig adversary = SearchConfig::astar_additive();
  SearchConfig table_planner = SearchConfig::breadth_first();
  std::string adversary_heuristic;  // black-box H_adv; empty: flavor default
  bool restart = false;

  unsigned workers = 0;
  std::string csv_path, records_path, plot_path, transcripts_path;

  // With no threats listed, grids run the three online models and STRIPS
  // the two offline ones.
  std::vector<std::string> effective_threats() const;
  // A per-threat entry wins; otherwise the black-box grid table uses
  // Manhattan and threshold 10 unless table.* keys changed the default.
  TableSettings table_for(const std::string& threat) const;
  int window_size() const;
  void validate() const;
};

// "key = value" lines, '#' comments. Keys are listed by config_keys().
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
std::vector<std::string> config_keys();

// "online-informed", "offline-black-box", ...
ThreatModel parse_threat(const std::string& name, int budget);

// Instance i of the configured corpus.
Grid instance_maze(const ExperimentConfig& config, std::size_t index);
Task instance_task(const ExperimentConfig& config, std::size_t index);
// Loads s.path when set, otherwise builds from the table corpus.
WindowTable build_table(const ExperimentConfig& config, const TableSettings& s,
                        TableStats* stats = nullptr);

struct AggregateRow {
  std::string threat;
  int budget = 0;
  std::size_t instances = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t errors = 0;
  std::size_t unsolvable = 0;
  std::size_t decreases = 0;
  double success_rate = 0;     // successes / (successes + failures)
  double unsolvable_rate = 0;  // same denominator
  double mean_increase = 0;    // over instances still solvable after the attack
  double mean_attack_seconds = 0;
  double max_attack_seconds = 0;
  double table_seconds = 0;

  bool operator==(const AggregateRow&) const = default;
};

struct AggregateReport {
  std::vector<AggregateRow> rows;
  bool operator==(const AggregateReport&) const = default;
  const AggregateRow* find(const std::string& threat, int budget) const;
};

AggregateReport aggregate(const std::vector<AttackReport>& records,
                          const std::map<std::string, double>& table_seconds = {});

struct ExperimentResult {
  AggregateReport report;
  std::vector<AttackReport> records;  // grouped by threat, then budget, then instance
  std::vector<std::string> transcripts;  // JSON lines, online attacks only
};

// Per-instance failures become records with outcome "error: ..." and never
// abort the batch.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string format_csv(const AggregateReport& report);
AggregateReport parse_csv(std::string_view text);
// One line per (threat, k): threat k success_rate mean_increase unsolvable_rate
std::string format_plot_data(const AggregateReport& report);
std::string format_records(const std::vector<AttackReport>& records, bool timings = true);

// Writes whichever outputs the config names; throws kIo with the path.
void emit_outputs(const ExperimentConfig& config, const ExperimentResult& result);
void write_file(const std::string& path, const std::string& content);

}  // namespace advplan
