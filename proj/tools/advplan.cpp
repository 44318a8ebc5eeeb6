// advplan: command-line front end for planning, table generation, attacks
// and experiments. Exit status is 0 on success, otherwise the numeric
// ErrorCategory of the failure (usage errors from CLI11 map to 2).
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "advplan/attacks.hpp"
#include "advplan/harness.hpp"
#include "advplan/reduction.hpp"
#include "advplan/util.hpp"
#include <json.hpp>

namespace fs = std::filesystem;
using namespace advplan;

namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// stdout when path is empty or "-"
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  write_file(path, text);
}

[[noreturn]] void usage(const std::string& m) { throw Error(ErrorCategory::kUsage, m); }

struct Global {
  std::string config_path;
  std::vector<std::string> sets;              // key=value
  std::map<std::string, std::string> direct;  // --key value
  std::vector<std::string> key_order;

  ExperimentConfig config() const {
    ExperimentConfig c;
    if (!config_path.empty()) c = load_config(config_path);
    for (const auto& k : key_order) {
      if (auto it = direct.find(k); it != direct.end()) apply_config_entry(c, k, it->second);
    }
    for (const auto& kv : sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) usage("--set expects key=value, got " + kv);
      auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t");
        auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      apply_config_entry(c, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    return c;
  }
};

// A single instance named on the command line, or index i of the corpus.
struct InstanceArgs {
  std::string maze, domain_file, problem_file;
  long index = -1;

  void add(CLI::App* cmd) {
    cmd->add_option("--maze", maze, "ASCII maze file ('-' for stdin)");
    cmd->add_option("--domain-file", domain_file, "PDDL domain");
    cmd->add_option("--problem-file", problem_file, "PDDL problem");
    cmd->add_option("--index", index, "instance of the configured corpus");
  }
  bool is_grid(const ExperimentConfig& c) const {
    if (!maze.empty()) return true;
    if (!domain_file.empty() || !problem_file.empty()) return false;
    return c.flavor == "grid";
  }
  void check() const {
    int given = !maze.empty() + (!domain_file.empty() || !problem_file.empty()) + (index >= 0);
    if (given != 1) usage("name exactly one instance: --maze, --domain-file/--problem-file or --index");
    if (domain_file.empty() != problem_file.empty()) usage("--domain-file and --problem-file go together");
  }
  Grid grid(const ExperimentConfig& c) const {
    return maze.empty() ? instance_maze(c, index) : parse_maze(read_file(maze));
  }
  Task task(const ExperimentConfig& c) const {
    if (index >= 0) return instance_task(c, index);
    return ground_task(parse_task(read_file(domain_file), read_file(problem_file)));
  }
  std::string name() const {
    if (!maze.empty()) return fs::path(maze).stem().string();
    if (!problem_file.empty()) return fs::path(problem_file).stem().string();
    return "instance-" + std::to_string(index);
  }
};

std::string maze_with_path(const Grid& g, const std::vector<Cell>& path) {
  std::string text = format_maze(g);
  for (const Cell& c : path) {
    if (c == g.start() || c == g.goal()) continue;
    text[c.row * (g.width() + 1) + c.col] = '*';
  }
  return text;
}

int cmd_plan(const Global& gl, const InstanceArgs& inst, const std::string& planner,
             const std::string& out) {
  auto c = gl.config();
  inst.check();
  if (inst.is_grid(c)) {
    Grid g = inst.grid(c);
    auto path = shortest_path(g, g.start(), g.goal());
    if (path.empty()) throw Error(ErrorCategory::kUnsolvable, "goal unreachable");
    emit(out, "; cost " + std::to_string(path.size() - 1) + "\n" + maze_with_path(g, path));
    return 0;
  }
  Task task = inst.task(c);
  SearchConfig cfg = planner.empty() ? c.agent : parse_search_config(planner);
  auto result = solve(task, cfg);
  if (result.outcome == SearchOutcome::kBudgetExhausted) {
    throw Error(ErrorCategory::kBudgetExhausted,
                "node budget exhausted after " + std::to_string(result.expanded) + " expansions");
  }
  if (!result.solved()) throw Error(ErrorCategory::kUnsolvable, "task is unsolvable");
  emit(out, "; cost " + result.cost().to_string() + ", " + std::to_string(result.expanded) +
                " expanded\n" + format_plan(task, result.plan));
  return 0;
}

int cmd_gen_mazes(const Global& gl, const std::string& out_dir) {
  auto c = gl.config();
  if (!out_dir.empty()) fs::create_directories(out_dir);
  std::string all;
  for (std::size_t i = 0; i < c.count; ++i) {
    std::string text = format_maze(instance_maze(c, i));
    if (out_dir.empty()) {
      all += (i ? "\n" : "") + text;
    } else {
      char name[32];
      std::snprintf(name, sizeof name, "maze-%04zu.txt", i);
      write_file((fs::path(out_dir) / name).string(), text);
    }
  }
  if (out_dir.empty()) std::cout << all;
  return 0;
}

int cmd_gen_table(const Global& gl, std::string threat, const std::string& out) {
  auto c = gl.config();
  c.validate();
  if (threat.empty()) threat = c.effective_threats().front();
  parse_threat(threat, 1).validate();
  TableStats stats;
  Stopwatch clock;
  WindowTable table = build_table(c, c.table_for(threat), &stats);
  table.metadata["threat"] = threat;
  emit(out, format_table(table));
  std::cerr << "table: " << table.size() << " entries, " << table.total_count()
            << " windows from " << stats.instances << " instances (" << stats.adversarial
            << " adversarial, " << stats.too_short << " too short, " << stats.unsolved
            << " unsolved) in " << clock.seconds() << " s\n";
  return 0;
}

struct AttackArgs {
  InstanceArgs inst;
  std::string threat = "online-informed";
  int k = 1;
  std::string table_path, transcript_path, out, oracle;
};

int cmd_attack(const Global& gl, const AttackArgs& a) {
  auto c = gl.config();
  a.inst.check();
  const bool grid = a.inst.is_grid(c);
  c.flavor = grid ? "grid" : "strips";
  ThreatModel t = parse_threat(a.threat, a.k);
  t.adversary_heuristic = c.adversary_heuristic;
  t.validate();
  AttackReport report;
  std::vector<TranscriptEvent> transcript;
  if (!a.oracle.empty()) {
    if (a.oracle != "exact") usage("--oracle takes 'exact'");
    report = grid ? online_oracle_attack(a.inst.grid(c), c.agent_heuristic, a.k)
                  : brute_force_attack(a.inst.task(c), c.agent, a.k);
  } else {
    if ((t.mode == AttackMode::kOnline) != grid) {
      usage(a.threat + (grid ? " cannot attack a maze" : " cannot attack a STRIPS task"));
    }
    TableSettings s = c.table_for(a.threat);
    if (!a.table_path.empty()) s.path = a.table_path;
    WindowTable table = build_table(c, s);
    if (grid) {
      auto r = online_attack(a.inst.grid(c), table, t, c.agent_heuristic);
      report = std::move(r.report);
      transcript = std::move(r.transcript);
    } else {
      report = offline_attack(a.inst.task(c), table, t, {c.agent, c.adversary, c.restart});
    }
  }
  report.instance = a.inst.name();
  emit(a.out, to_json(report) + "\n");
  if (!a.transcript_path.empty()) {
    std::string lines;
    for (const auto& e : transcript) lines += to_json(e) + "\n";
    emit(a.transcript_path, lines);
  }
  return 0;
}

int cmd_bench(const Global& gl) {
  auto c = gl.config();
  auto result = run_experiment(c);
  emit_outputs(c, result);
  if (c.csv_path.empty()) std::cout << format_csv(result.report);
  for (const auto& row : result.report.rows) {
    std::cerr << row.threat << " k=" << row.budget << ": success " << row.success_rate * 100
              << "%, mean increase " << row.mean_increase << ", unsolvable "
              << row.unsolvable_rate * 100 << "%, errors " << row.errors << "\n";
  }
  return 0;
}

int cmd_reduce(const std::string& graph_path, const std::string& out_dir, int k,
               const std::string& h_text) {
  ArcGraph g = parse_arc_list(read_file(graph_path));
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "domain.pddl").string(), mvap_domain_pddl(g));
    write_file((fs::path(out_dir) / "problem.pddl").string(), mvap_problem_pddl(g));
  }
  Task task = mvap_to_strips(g);
  nlohmann::json j;
  j["nodes"] = g.nodes;
  j["arcs"] = g.arcs.size();
  j["shortest_path"] = shortest_path_cost(g).to_string();
  j["plan_cost"] = solve(task, SearchConfig::uniform_cost()).cost().to_string();
  if (k >= 0) {
    if (h_text.empty()) usage("--k needs --cost-bound");
    Cost h = h_text == "inf" ? Cost::infinite() : Cost(std::stoll(h_text));
    auto mvap = solve_dmvap_exhaustive(g, k, h);
    auto attack = brute_force_attack(task, SearchConfig::uniform_cost(), k);
    j["k"] = k;
    j["h"] = h.to_string();
    j["d_mvap"] = mvap.yes;
    j["d_advcp"] = attack.attacked_cost >= h;
    j["max_cost"] = mvap.best_cost.to_string();
    j["removed"] = attack.removed;
  }
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_validate(const Global& gl, const InstanceArgs& inst, const std::string& plan_path) {
  auto c = gl.config();
  if (inst.domain_file.empty() || inst.problem_file.empty()) {
    usage("validate needs --domain-file and --problem-file");
  }
  Task task = inst.task(c);
  Plan plan = parse_plan(task, read_file(plan_path));
  auto v = validate_plan(task, plan);
  if (!v.valid) {
    throw Error(ErrorCategory::kPlanInvalid, v.violation);
  }
  std::cout << "valid, cost " << v.cost << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"advplan: planning, adversarial attacks on planners, experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Global gl;
  app.add_option("--config", gl.config_path, "key = value configuration file");
  app.add_option("--set", gl.sets, "override one configuration key (key=value)");
  // Every configuration key is also a flag of its own.
  gl.key_order = config_keys();
  for (const auto& key : gl.key_order) {
    app.add_option_function<std::string>(
           "--" + key, [&gl, key](const std::string& v) { gl.direct[key] = v; },
           "configuration key " + key)
        ->group("Configuration");
  }

  InstanceArgs plan_inst;
  std::string planner, plan_out;
  auto* plan = app.add_subcommand("plan", "solve a STRIPS task or maze");
  plan_inst.add(plan);
  plan->add_option("--planner", planner, "bfs, astar+additive, gbfs+goal-count, ...");
  plan->add_option("--out", plan_out, "plan file (default stdout)");

  std::string maze_dir;
  auto* gen_mazes = app.add_subcommand("gen-mazes", "write the configured maze corpus");
  gen_mazes->add_option("--out-dir", maze_dir, "one file per maze (default: stdout)");

  std::string table_threat, table_out;
  auto* gen_table = app.add_subcommand("gen-table", "build a window table");
  gen_table->add_option("--threat", table_threat, "threat model whose table settings apply");
  gen_table->add_option("--out", table_out, "table file (default stdout)");

  AttackArgs attack_args;
  auto* attack = app.add_subcommand("attack", "attack one instance");
  attack_args.inst.add(attack);
  attack->add_option("--threat", attack_args.threat, "online-informed, offline-black-box, ...");
  attack->add_option("-k,--k", attack_args.k, "budget");
  attack->add_option("--table", attack_args.table_path, "window table (default: build one)");
  attack->add_option("--transcript", attack_args.transcript_path, "JSONL transcript (online)");
  attack->add_option("--out", attack_args.out, "JSONL report (default stdout)");
  attack->add_option("--oracle", attack_args.oracle, "'exact': brute-force oracle instead");

  auto* bench = app.add_subcommand("bench", "run the configured experiment");

  std::string graph_path, reduce_out, h_text;
  int reduce_k = -1;
  auto* reduce = app.add_subcommand("reduce-mvap", "reduce a most-vital-arcs instance to STRIPS");
  reduce->add_option("--graph", graph_path, "arc list: 'n s t' then 'u v cost' lines")->required();
  reduce->add_option("--out-dir", reduce_out, "write domain.pddl and problem.pddl here");
  reduce->add_option("-k,--k", reduce_k, "decide with budget k");
  reduce->add_option("--cost-bound", h_text, "cost threshold (integer or inf)");

  InstanceArgs val_inst;
  std::string plan_path;
  auto* validate = app.add_subcommand("validate", "check a plan against a task");
  validate->add_option("--domain-file", val_inst.domain_file)->required();
  validate->add_option("--problem-file", val_inst.problem_file)->required();
  validate->add_option("--plan", plan_path, "one action per line")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorCategory::kUsage);
  }

  try {
    if (*plan) return cmd_plan(gl, plan_inst, planner, plan_out);
    if (*gen_mazes) return cmd_gen_mazes(gl, maze_dir);
    if (*gen_table) return cmd_gen_table(gl, table_threat, table_out);
    if (*attack) return cmd_attack(gl, attack_args);
    if (*bench) return cmd_bench(gl);
    if (*reduce) return cmd_reduce(graph_path, reduce_out, reduce_k, h_text);
    if (*validate) return cmd_validate(gl, val_inst, plan_path);
  } catch (const Error& e) {
    std::cerr << "advplan: error [" << category_name(e.category()) << "]: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "advplan: error [io]: " << e.what() << "\n";
    return static_cast<int>(ErrorCategory::kIo);
  }
  return 0;
}
