#include "advplan/harness.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "advplan/util.hpp"
#include "sexpr.hpp"

namespace advplan {

SearchConfig parse_search_config(std::string_view text) {
  std::string t = detail::to_lower(text);
  auto plus = t.find('+');
  SearchConfig config;
  config.algorithm = parse_search_algorithm(t.substr(0, plus));
  config.heuristic = plus == std::string::npos ? HeuristicKind::kZero
                                               : parse_heuristic_kind(t.substr(plus + 1));
  if (config.algorithm == SearchAlgorithm::kGreedyBestFirst && plus == std::string::npos) {
    config.heuristic = HeuristicKind::kAdditive;
  }
  return config;
}

// --- config ---------------------------------------------------------------------

std::vector<std::string> ExperimentConfig::effective_threats() const {
  if (!threats.empty()) return threats;
  if (flavor == "strips") return {"offline-agent-heuristic", "offline-black-box"};
  return {"online-informed", "online-agent-heuristic", "online-black-box"};
}

TableSettings ExperimentConfig::table_for(const std::string& threat) const {
  if (auto it = tables.find(threat); it != tables.end()) return it->second;
  if (flavor == "grid" && threat == "online-black-box" && table_default == TableSettings{}) {
    return {10, GridHeuristic::kManhattan, ""};
  }
  return table_default;
}

int ExperimentConfig::window_size() const {
  if (window > 0) return window;
  return flavor == "strips" ? 4 : 3;
}

namespace {

[[noreturn]] void bad(const std::string& message) {
  throw Error(ErrorCategory::kUsage, message);
}

}  // namespace

ThreatModel parse_threat(const std::string& name, int budget) {
  auto dash = name.find('-');
  if (dash == std::string::npos) bad("threat model must look like online-informed: " + name);
  ThreatModel t;
  t.mode = parse_attack_mode(name.substr(0, dash));
  t.knowledge = parse_knowledge(name.substr(dash + 1));
  t.budget = budget;
  return t;
}

void ExperimentConfig::validate() const {
  if (flavor != "grid" && flavor != "strips") bad("flavor must be grid or strips");
  if (flavor == "strips" && domain != "air-cargo" && domain != "blocks") {
    bad("domain must be air-cargo or blocks");
  }
  if (budgets.empty()) bad("no budgets given");
  int max_k = *std::max_element(budgets.begin(), budgets.end());
  for (const auto& name : effective_threats()) {
    ThreatModel t = parse_threat(name, max_k);
    t.validate();
    if ((t.mode == AttackMode::kOnline) != (flavor == "grid")) {
      bad(name + " does not apply to " + flavor + " experiments");
    }
  }
  for (int k : budgets) {
    if (k < 0) bad("negative budget");
  }
  if (window_size() < (flavor == "strips" ? 2 : 1)) bad("window too small");
}

namespace {

template <typename T>
T number(const std::string& key, const std::string& value) {
  T out{};
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    bad("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

bool boolean(const std::string& key, const std::string& value) {
  std::string v = detail::to_lower(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad("bad boolean for " + key + ": '" + value + "'");
}

std::vector<std::string> list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void apply_table_field(TableSettings& t, const std::string& field, const std::string& key,
                       const std::string& value) {
  if (field == "threshold") {
    t.threshold = number<std::int64_t>(key, value);
  } else if (field == "heuristic") {
    t.heuristic = parse_grid_heuristic(value);
  } else if (field == "path") {
    t.path = value;
  } else {
    bad("unknown config key: " + key);
  }
}

const std::vector<std::string> kKeys = {
    "flavor", "domain", "count", "seed", "width", "height", "wall-frequency",
    "max-attempts", "cargos", "planes", "airports", "blocks", "table.count", "table.seed",
    "table.window", "table.reflections", "table.match-approach", "table.cargos",
    "table.planes", "table.airports", "table.blocks", "table.planner", "table.threshold",
    "table.heuristic", "table.path", "<threat>.threshold", "<threat>.heuristic",
    "<threat>.path", "threats", "budgets", "agent.heuristic", "agent.planner",
    "adversary.planner", "adversary.heuristic", "restart", "workers", "output.csv",
    "output.records", "output.plot", "output.transcripts"};

}  // namespace

std::vector<std::string> config_keys() { return kKeys; }

void apply_config_entry(ExperimentConfig& c, const std::string& key, const std::string& value) {
  auto i32 = [&] { return number<int>(key, value); };
  auto u64 = [&] { return number<std::uint64_t>(key, value); };
  if (key == "flavor") c.flavor = detail::to_lower(value);
  else if (key == "domain") c.domain = detail::to_lower(value);
  else if (key == "count") c.count = u64();
  else if (key == "seed") c.seed = u64();
  else if (key == "width") c.maze.width = i32();
  else if (key == "height") c.maze.height = i32();
  else if (key == "wall-frequency") c.maze.wall_frequency = number<double>(key, value);
  else if (key == "max-attempts") c.maze.max_attempts = i32();
  else if (key == "cargos") c.cargo.cargos = i32();
  else if (key == "planes") c.cargo.planes = i32();
  else if (key == "airports") c.cargo.airports = i32();
  else if (key == "blocks") c.blocks.blocks = i32();
  else if (key == "table.count") c.table_count = u64();
  else if (key == "table.seed") c.table_seed = u64();
  else if (key == "table.window") c.window = i32();
  else if (key == "table.reflections") c.match.reflections = boolean(key, value);
  else if (key == "table.match-approach") c.match.match_approach = boolean(key, value);
  else if (key == "table.cargos") c.table_cargo.cargos = i32();
  else if (key == "table.planes") c.table_cargo.planes = i32();
  else if (key == "table.airports") c.table_cargo.airports = i32();
  else if (key == "table.blocks") c.table_blocks.blocks = i32();
  else if (key == "table.planner") c.table_planner = parse_search_config(value);
  else if (key.rfind("table.", 0) == 0) apply_table_field(c.table_default, key.substr(6), key, value);
  else if (key == "threats") c.threats = list(value);
  else if (key == "budgets") {
    c.budgets.clear();
    for (auto& k : list(value)) c.budgets.push_back(number<int>(key, k));
  } else if (key == "agent.heuristic") c.agent_heuristic = parse_grid_heuristic(value);
  else if (key == "agent.planner") c.agent = parse_search_config(value);
  else if (key == "adversary.planner") c.adversary = parse_search_config(value);
  else if (key == "adversary.heuristic") c.adversary_heuristic = value;
  else if (key == "restart") c.restart = boolean(key, value);
  else if (key == "workers") c.workers = number<unsigned>(key, value);
  else if (key == "output.csv") c.csv_path = value;
  else if (key == "output.records") c.records_path = value;
  else if (key == "output.plot") c.plot_path = value;
  else if (key == "output.transcripts") c.transcripts_path = value;
  else if (auto dot = key.find('.'); dot != std::string::npos &&
                                     (key.rfind("online-", 0) == 0 || key.rfind("offline-", 0) == 0)) {
    std::string threat = key.substr(0, dot);
    auto [it, inserted] = c.tables.try_emplace(threat, c.table_for(threat));
    apply_table_field(it->second, key.substr(dot + 1), key, value);
  } else {
    bad("unknown config key: " + key);
  }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no, 1);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no, 1);
    try {
      apply_config_entry(base, key, value);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, 1);
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

// --- aggregation -------------------------------------------------------------------

const AggregateRow* AggregateReport::find(const std::string& threat, int budget) const {
  for (const auto& r : rows) {
    if (r.threat == threat && r.budget == budget) return &r;
  }
  return nullptr;
}

namespace {

bool is_error(const AttackReport& r) {
  return r.outcome.rfind("error", 0) == 0 || r.outcome == "agent-budget-exhausted";
}

}  // namespace

AggregateReport aggregate(const std::vector<AttackReport>& records,
                          const std::map<std::string, double>& table_seconds) {
  AggregateReport out;
  std::map<std::pair<std::string, int>, std::size_t> index;
  std::vector<double> increase_sum;
  std::vector<std::size_t> finite;
  std::vector<double> seconds;
  for (const auto& r : records) {
    auto [it, fresh] = index.try_emplace({r.threat, r.budget}, out.rows.size());
    if (fresh) {
      AggregateRow row;
      row.threat = r.threat;
      row.budget = r.budget;
      if (auto t = table_seconds.find(r.threat); t != table_seconds.end()) {
        row.table_seconds = t->second;
      }
      out.rows.push_back(row);
      increase_sum.push_back(0);
      finite.push_back(0);
      seconds.push_back(0);
    }
    std::size_t i = it->second;
    AggregateRow& row = out.rows[i];
    ++row.instances;
    if (is_error(r)) {
      ++row.errors;
      continue;
    }
    (r.success() ? row.successes : row.failures)++;
    if (r.decreased()) ++row.decreases;
    if (r.attacked_cost.is_infinite()) {
      ++row.unsolvable;
    } else {
      increase_sum[i] += double(r.attacked_cost.value() - r.baseline_cost.value());
      ++finite[i];
    }
    seconds[i] += r.attack_seconds;
    row.max_attack_seconds = std::max(row.max_attack_seconds, r.attack_seconds);
  }
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    AggregateRow& row = out.rows[i];
    std::size_t counted = row.successes + row.failures;
    if (counted) {
      row.success_rate = double(row.successes) / double(counted);
      row.unsolvable_rate = double(row.unsolvable) / double(counted);
      row.mean_attack_seconds = seconds[i] / double(counted);
    }
    if (finite[i]) row.mean_increase = increase_sum[i] / double(finite[i]);
  }
  return out;
}

// --- experiment -----------------------------------------------------------------------

Grid instance_maze(const ExperimentConfig& c, std::size_t index) {
  MazeSpec spec = c.maze;
  spec.seed = derive_seed(c.seed, index);
  return generate_maze(spec);
}

Task instance_task(const ExperimentConfig& c, std::size_t index) {
  std::uint64_t seed = derive_seed(c.seed, index);
  if (c.domain == "blocks") {
    BlocksSpec b = c.blocks;
    b.seed = seed;
    return generate_blocks(b);
  }
  AirCargoSpec a = c.cargo;
  a.seed = seed;
  return generate_air_cargo(a);
}

WindowTable build_table(const ExperimentConfig& c, const TableSettings& s, TableStats* stats) {
  WindowTable table;
  if (!s.path.empty()) {
    table = load_table(s.path);
  } else if (c.flavor == "grid") {
    GridTableSpec spec;
    spec.count = c.table_count;
    spec.maze = c.maze;
    spec.maze.seed = c.table_seed;
    spec.n = c.window_size();
    spec.heuristic = s.heuristic;
    spec.threshold = s.threshold;
    spec.options = c.match;
    spec.workers = c.workers;
    table = build_grid_table(spec, stats);
  } else {
    StripsTableSpec spec;
    spec.count = c.table_count;
    spec.n = c.window_size();
    spec.planner = c.table_planner;
    spec.threshold = s.threshold;
    spec.workers = c.workers;
    TaskGenerator gen = [&c](std::size_t i) {
      std::uint64_t seed = derive_seed(c.table_seed, i);
      if (c.domain == "blocks") {
        BlocksSpec b = c.table_blocks;
        b.seed = seed;
        return generate_blocks(b);
      }
      AirCargoSpec a = c.table_cargo;
      a.seed = seed;
      return generate_air_cargo(a);
    };
    table = build_strips_table(spec, gen, stats);
  }
  return table;
}

namespace {

AttackReport error_record(const std::string& instance, const std::string& threat, int k,
                          const std::string& what) {
  AttackReport r;
  r.instance = instance;
  r.threat = threat;
  r.budget = k;
  r.outcome = "error: " + what;
  return r;
}

struct Tables {
  std::map<std::string, const WindowTable*> by_threat;
  std::map<std::string, double> seconds;
  std::vector<std::unique_ptr<WindowTable>> owned;
};

Tables prepare_tables(const ExperimentConfig& c, const std::vector<std::string>& threats) {
  Tables out;
  std::map<std::string, const WindowTable*> cache;
  for (const auto& threat : threats) {
    TableSettings s = c.table_for(threat);
    std::string key = s.path.empty()
                          ? "build " + std::to_string(s.threshold) + " " + to_string(s.heuristic)
                          : "load " + s.path;
    if (auto it = cache.find(key); it != cache.end()) {
      out.by_threat[threat] = it->second;
      out.seconds[threat] = 0;
      continue;
    }
    Stopwatch clock;
    WindowTable table = build_table(c, s);
    out.seconds[threat] = clock.seconds();
    out.owned.push_back(std::make_unique<WindowTable>(std::move(table)));
    cache[key] = out.by_threat[threat] = out.owned.back().get();
  }
  return out;
}

// Reports for one instance, threat-major then budget.
using InstanceRecords = std::vector<AttackReport>;

struct InstanceOutput {
  InstanceRecords records;
  std::vector<std::string> transcripts;
};

std::string transcript_line(const std::string& instance, const AttackReport& r,
                            const std::vector<TranscriptEvent>& events) {
  nlohmann::json j;
  j["instance"] = instance;
  j["threat"] = r.threat;
  j["budget"] = r.budget;
  auto list = nlohmann::json::array();
  for (const auto& e : events) list.push_back(nlohmann::json::parse(to_json(e)));
  j["events"] = list;
  return j.dump();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto threats = c.effective_threats();
  Tables tables = prepare_tables(c, threats);
  const bool grid = c.flavor == "grid";
  const bool want_transcripts = !c.transcripts_path.empty();
  const int max_k = *std::max_element(c.budgets.begin(), c.budgets.end());

  std::function<InstanceOutput(std::size_t)> one = [&](std::size_t i) {
    InstanceOutput out;
    std::string name = (grid ? "maze-" : c.domain + "-") + std::to_string(i);
    auto fail_all = [&](const std::string& what) {
      for (const auto& threat : threats) {
        for (int k : c.budgets) out.records.push_back(error_record(name, threat, k, what));
      }
    };
    if (grid) {
      Grid maze;
      try {
        maze = instance_maze(c, i);
      } catch (const Error& e) {
        fail_all(e.what());
        return out;
      }
      for (const auto& threat : threats) {
        for (int k : c.budgets) {
          try {
            ThreatModel t = parse_threat(threat, k);
            t.adversary_heuristic = c.adversary_heuristic;
            auto result = online_attack(maze, *tables.by_threat.at(threat), t, c.agent_heuristic);
            result.report.instance = name;
            if (want_transcripts) {
              out.transcripts.push_back(transcript_line(name, result.report, result.transcript));
            }
            out.records.push_back(std::move(result.report));
          } catch (const Error& e) {
            out.records.push_back(error_record(name, threat, k, e.what()));
          }
        }
      }
      return out;
    }
    Task task;
    try {
      task = instance_task(c, i);
    } catch (const Error& e) {
      fail_all(e.what());
      return out;
    }
    Stopwatch base_clock;
    auto base = solve(task, c.agent);
    double base_seconds = base_clock.seconds();
    if (!base.solved()) {
      fail_all("baseline " + to_string(base.outcome));
      return out;
    }
    for (const auto& threat : threats) {
      try {
        ThreatModel t = parse_threat(threat, max_k);
        t.adversary_heuristic = c.adversary_heuristic;
        OfflineAttackConfig config{c.agent, c.adversary, c.restart};
        Stopwatch clock;
        OfflineChanges changes = offline_changes(task, *tables.by_threat.at(threat), t, config);
        double attack_seconds = clock.seconds();
        // Cumulative budgets: budget k keeps the first k removals of one run.
        for (int k : c.budgets) {
          AttackReport r;
          r.instance = name;
          r.attack = "offline";
          r.threat = threat;
          r.budget = k;
          r.baseline_cost = base.cost();
          r.outcome = changes.outcome;
          r.lookups = changes.lookups;
          r.matches = changes.matches;
          r.adversary_expanded = changes.expanded;
          r.attack_seconds = attack_seconds;
          std::size_t take = std::min<std::size_t>(k, changes.removed.size());
          r.removed_actions.assign(changes.removed.begin(), changes.removed.begin() + take);
          for (ActionId a : r.removed_actions) r.removed.push_back(task.operators[a].name());
          Stopwatch replan;
          auto attacked =
              take == 0 ? base : solve(task, c.agent, RemovedSet(r.removed_actions));
          r.replan_seconds = take == 0 ? base_seconds : replan.seconds();
          r.agent_expanded = attacked.expanded;
          r.solves = 1;
          if (attacked.outcome == SearchOutcome::kBudgetExhausted) {
            r.outcome = "agent-budget-exhausted";
            r.attacked_cost = r.baseline_cost;
          } else {
            r.attacked_cost = attacked.cost();
          }
          out.records.push_back(std::move(r));
        }
      } catch (const Error& e) {
        for (int k : c.budgets) out.records.push_back(error_record(name, threat, k, e.what()));
      }
    }
    return out;
  };

  auto per_instance = parallel_map<InstanceOutput>(c.count, c.workers, one);
  ExperimentResult result;
  const std::size_t slots = threats.size() * c.budgets.size();
  for (std::size_t s = 0; s < slots; ++s) {
    for (auto& inst : per_instance) result.records.push_back(inst.records[s]);
  }
  for (auto& inst : per_instance) {
    for (auto& line : inst.transcripts) result.transcripts.push_back(std::move(line));
  }
  result.report = aggregate(result.records, tables.seconds);
  return result;
}

// --- emission ----------------------------------------------------------------------------

namespace {

const char* kCsvHeader =
    "threat,budget,instances,successes,failures,errors,unsolvable,decreases,success_rate,"
    "unsolvable_rate,mean_increase,mean_attack_seconds,max_attack_seconds,table_seconds";

// Shortest representation that parses back to the same double.
std::string real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

std::string format_csv(const AggregateReport& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : report.rows) {
    out += r.threat + "," + std::to_string(r.budget) + "," + std::to_string(r.instances) + "," +
           std::to_string(r.successes) + "," + std::to_string(r.failures) + "," +
           std::to_string(r.errors) + "," + std::to_string(r.unsolvable) + "," +
           std::to_string(r.decreases) + "," + real(r.success_rate) + "," +
           real(r.unsolvable_rate) + "," + real(r.mean_increase) + "," +
           real(r.mean_attack_seconds) + "," + real(r.max_attack_seconds) + "," +
           real(r.table_seconds) + "\n";
  }
  return out;
}

AggregateReport parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParseError("bad CSV header", 1, 1);
  AggregateReport out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    for (std::string x; std::getline(fields, x, ',');) f.push_back(x);
    if (f.size() != 14) throw ParseError("expected 14 columns", line_no, 1);
    try {
      AggregateRow r;
      r.threat = f[0];
      r.budget = number<int>("budget", f[1]);
      std::size_t* counts[] = {&r.instances, &r.successes, &r.failures,
                               &r.errors,    &r.unsolvable, &r.decreases};
      for (int i = 0; i < 6; ++i) *counts[i] = number<std::size_t>("count", f[2 + i]);
      double* reals[] = {&r.success_rate,        &r.unsolvable_rate,    &r.mean_increase,
                         &r.mean_attack_seconds, &r.max_attack_seconds, &r.table_seconds};
      for (int i = 0; i < 6; ++i) *reals[i] = number<double>("rate", f[8 + i]);
      out.rows.push_back(r);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no, 1);
    }
  }
  return out;
}

std::string format_plot_data(const AggregateReport& report) {
  std::string out = "# threat k success_rate mean_increase unsolvable_rate\n";
  for (const auto& r : report.rows) {
    out += r.threat + " " + std::to_string(r.budget) + " " + real(r.success_rate) + " " +
           real(r.mean_increase) + " " + real(r.unsolvable_rate) + "\n";
  }
  return out;
}

std::string format_records(const std::vector<AttackReport>& records, bool timings) {
  std::string out;
  for (const auto& r : records) out += to_json(r, timings) + "\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCategory::kIo, "cannot write " + path);
  f << content;
  if (!f) throw Error(ErrorCategory::kIo, "failed writing " + path);
}

void emit_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  if (!config.csv_path.empty()) write_file(config.csv_path, format_csv(result.report));
  if (!config.plot_path.empty()) write_file(config.plot_path, format_plot_data(result.report));
  if (!config.records_path.empty()) {
    write_file(config.records_path, format_records(result.records));
  }
  if (!config.transcripts_path.empty()) {
    std::string text;
    for (const auto& line : result.transcripts) text += line + "\n";
    write_file(config.transcripts_path, text);
  }
}

}  // namespace advplan
