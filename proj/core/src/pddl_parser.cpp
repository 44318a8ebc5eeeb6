#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "advplan/strips.hpp"
#include "sexpr.hpp"

namespace advplan {

using detail::SExpr;
using detail::to_lower;

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& message) {
  throw ParseError(message, at.line, at.column);
}

const std::set<std::string>& supported_requirements() {
  static const std::set<std::string> kSupported = {":strips", ":typing",
                                                   ":action-costs"};
  return kSupported;
}

bool is_variable(std::string_view name) {
  return !name.empty() && name.front() == '?';
}

const SExpr& expect_list(const SExpr& expr, const char* what) {
  if (!expr.is_list) fail(expr, std::string("expected list for ") + what);
  return expr;
}

const std::string& expect_atom(const SExpr& expr, const char* what) {
  if (!expr.is_atom()) fail(expr, std::string("expected name for ") + what);
  return expr.atom;
}

// "a b - t c - u d" -> [(a,t) (b,t) (c,u) (d,object)]
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items,
                                        std::size_t begin) {
  std::vector<TypedName> out;
  std::vector<std::string> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& item = items[i];
    if (item.is_atom() && item.atom == "-") {
      if (i + 1 >= items.size()) fail(item, "missing type after '-'");
      const SExpr& type = items[i + 1];
      if (type.is_list) {
        if (!type.items.empty() && type.items[0].is_keyword("either")) {
          throw UnsupportedFeature("either");
        }
        fail(type, "expected type name");
      }
      if (pending.empty()) fail(item, "'-' without preceding names");
      for (auto& name : pending) out.push_back({name, type.atom});
      pending.clear();
      ++i;
      continue;
    }
    pending.push_back(expect_atom(item, "typed list"));
  }
  for (auto& name : pending) out.push_back({name, "object"});
  return out;
}

Predicate parse_atom(const SExpr& expr) {
  expect_list(expr, "atom");
  if (expr.items.empty()) fail(expr, "empty atom");
  Predicate p;
  p.name = expect_atom(expr.items[0], "predicate");
  for (std::size_t i = 1; i < expr.items.size(); ++i) {
    p.args.push_back(expect_atom(expr.items[i], "predicate argument"));
  }
  return p;
}

void reject_construct(const SExpr& head) {
  std::string word = head.lowered();
  if (word == "not") throw UnsupportedFeature(":negative-preconditions");
  if (word == "or" || word == "imply") {
    throw UnsupportedFeature(":disjunctive-preconditions");
  }
  if (word == "forall" || word == "exists" || word == "when") {
    throw UnsupportedFeature(":adl");
  }
  if (word == "=") throw UnsupportedFeature(":equality");
  if (word == "<" || word == ">" || word == "<=" || word == ">=" ||
      word == "increase" || word == "decrease" || word == "assign") {
    throw UnsupportedFeature(":numeric-fluents");
  }
}

// A positive conjunction: (and a b ...), a single atom, or ().
std::vector<Predicate> parse_conjunction(const SExpr& expr) {
  expect_list(expr, "condition");
  std::vector<Predicate> out;
  if (expr.items.empty()) return out;
  const SExpr& head = expr.items[0];
  if (head.is_keyword("and")) {
    for (std::size_t i = 1; i < expr.items.size(); ++i) {
      const SExpr& sub = expr.items[i];
      expect_list(sub, "condition");
      if (!sub.items.empty() && sub.items[0].is_atom()) {
        reject_construct(sub.items[0]);
      }
      if (!sub.items.empty() && sub.items[0].is_keyword("and")) {
        auto nested = parse_conjunction(sub);
        out.insert(out.end(), nested.begin(), nested.end());
      } else {
        out.push_back(parse_atom(sub));
      }
    }
    return out;
  }
  if (head.is_atom()) reject_construct(head);
  out.push_back(parse_atom(expr));
  return out;
}

void sort_unique(std::vector<Predicate>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct EffectParts {
  std::vector<Predicate> add;
  std::vector<Predicate> del;
  std::optional<std::int64_t> cost;
};

void parse_effect_item(const SExpr& item, EffectParts& parts) {
  expect_list(item, "effect");
  if (item.items.empty()) return;
  const SExpr& head = item.items[0];
  if (head.is_keyword("and")) {
    for (std::size_t i = 1; i < item.items.size(); ++i) {
      parse_effect_item(item.items[i], parts);
    }
    return;
  }
  if (head.is_keyword("not")) {
    if (item.items.size() != 2) fail(item, "malformed negative effect");
    parts.del.push_back(parse_atom(item.items[1]));
    return;
  }
  if (head.is_keyword("increase")) {
    if (item.items.size() == 3 && item.items[1].is_list &&
        item.items[1].items.size() == 1 &&
        item.items[1].items[0].is_keyword("total-cost") &&
        item.items[2].is_atom()) {
      const std::string& text = item.items[2].atom;
      std::int64_t value = -1;
      if (!text.empty() &&
          std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        value = std::stoll(text);
      }
      if (value < 0) {
        fail(item.items[2], "action cost must be a non-negative integer");
      }
      parts.cost = parts.cost.value_or(0) + value;
      return;
    }
    throw UnsupportedFeature(":numeric-fluents");
  }
  if (head.is_atom()) reject_construct(head);
  parts.add.push_back(parse_atom(item));
}

class DomainReader {
 public:
  explicit DomainReader(Task& task) : task_(task) {}

  void read(const SExpr& root) {
    expect_list(root, "domain");
    if (root.items.size() < 2 || !root.items[0].is_keyword("define")) {
      fail(root, "expected (define (domain ...) ...)");
    }
    const SExpr& header = expect_list(root.items[1], "domain header");
    if (header.items.size() != 2 || !header.items[0].is_keyword("domain")) {
      fail(header, "expected (domain NAME)");
    }
    task_.domain_name = expect_atom(header.items[1], "domain name");
    for (std::size_t i = 2; i < root.items.size(); ++i) {
      section(root.items[i]);
    }
    check_schemas();
  }

 private:
  void section(const SExpr& sec) {
    expect_list(sec, "domain section");
    if (sec.items.empty() || !sec.items[0].is_atom()) {
      fail(sec, "expected section keyword");
    }
    std::string kind = sec.items[0].lowered();
    if (kind == ":requirements") {
      for (std::size_t i = 1; i < sec.items.size(); ++i) {
        std::string req = to_lower(expect_atom(sec.items[i], "requirement"));
        if (!supported_requirements().contains(req)) {
          throw UnsupportedFeature(req);
        }
        if (req == ":action-costs") task_.uses_action_costs = true;
        task_.requirements.push_back(req);
      }
    } else if (kind == ":types") {
      task_.types = parse_typed_list(sec.items, 1);
    } else if (kind == ":constants") {
      task_.constants = parse_typed_list(sec.items, 1);
    } else if (kind == ":predicates") {
      for (std::size_t i = 1; i < sec.items.size(); ++i) {
        const SExpr& decl = expect_list(sec.items[i], "predicate declaration");
        if (decl.items.empty()) fail(decl, "empty predicate declaration");
        PredicateSignature sig;
        sig.name = expect_atom(decl.items[0], "predicate name");
        sig.parameters = parse_typed_list(decl.items, 1);
        task_.predicates.push_back(std::move(sig));
      }
    } else if (kind == ":functions") {
      // Only the total-cost function of :action-costs is accepted.
      for (std::size_t i = 1; i < sec.items.size(); ++i) {
        const SExpr& item = sec.items[i];
        if (item.is_atom()) {
          if (item.atom == "-" || item.lowered() == "number") continue;
          fail(item, "unexpected token in :functions");
        }
        if (item.items.size() != 1 || !item.items[0].is_keyword("total-cost")) {
          throw UnsupportedFeature(":numeric-fluents");
        }
      }
    } else if (kind == ":action") {
      task_.schemas.push_back(action(sec));
    } else if (kind == ":durative-action") {
      throw UnsupportedFeature(":durative-actions");
    } else if (kind == ":derived") {
      throw UnsupportedFeature(":derived-predicates");
    } else {
      fail(sec, "unknown domain section " + kind);
    }
  }

  ActionSchema action(const SExpr& sec) {
    if (sec.items.size() < 2) fail(sec, "action without name");
    ActionSchema schema;
    schema.name = expect_atom(sec.items[1], "action name");
    bool has_cost = false;
    for (std::size_t i = 2; i < sec.items.size(); i += 2) {
      const SExpr& key = sec.items[i];
      if (!key.is_atom()) fail(key, "expected action keyword");
      if (i + 1 >= sec.items.size()) fail(key, "missing value for keyword");
      const SExpr& value = sec.items[i + 1];
      std::string k = key.lowered();
      if (k == ":parameters") {
        schema.parameters =
            parse_typed_list(expect_list(value, "parameters").items, 0);
      } else if (k == ":precondition") {
        schema.preconditions = parse_conjunction(value);
      } else if (k == ":effect") {
        EffectParts parts;
        parse_effect_item(value, parts);
        schema.add_effects = std::move(parts.add);
        schema.del_effects = std::move(parts.del);
        if (parts.cost) {
          schema.cost = *parts.cost;
          has_cost = true;
        }
      } else {
        fail(key, "unknown action keyword " + k);
      }
    }
    if (has_cost && !task_.uses_action_costs) {
      fail(sec, "action cost used without :action-costs requirement");
    }
    sort_unique(schema.preconditions);
    sort_unique(schema.add_effects);
    sort_unique(schema.del_effects);
    return schema;
  }

  void check_schemas() {
    std::set<std::string> type_names = {"object"};
    for (auto& t : task_.types) type_names.insert(t.name);
    for (auto& t : task_.types) {
      if (!type_names.contains(t.type)) {
        throw Error(ErrorCategory::kInvalidInput, "unknown type " + t.type);
      }
    }
    auto check_type = [&](const std::string& type) {
      if (!type_names.contains(type)) {
        throw Error(ErrorCategory::kInvalidInput, "unknown type " + type);
      }
    };
    for (auto& c : task_.constants) check_type(c.type);
    for (auto& p : task_.predicates) {
      for (auto& param : p.parameters) check_type(param.type);
    }
    std::set<std::string> names;
    for (auto& schema : task_.schemas) {
      if (!names.insert(schema.name).second) {
        throw Error(ErrorCategory::kInvalidInput,
                    "duplicate action " + schema.name);
      }
      std::set<std::string> vars;
      for (auto& param : schema.parameters) {
        check_type(param.type);
        if (!is_variable(param.name)) {
          throw Error(ErrorCategory::kInvalidInput,
                      "parameter " + param.name + " of " + schema.name +
                          " is not a variable");
        }
        vars.insert(param.name);
      }
      auto check_atoms = [&](const std::vector<Predicate>& atoms) {
        for (auto& atom : atoms) {
          check_arity(atom);
          for (auto& arg : atom.args) {
            if (is_variable(arg) ? !vars.contains(arg) : !is_constant(arg)) {
              throw Error(ErrorCategory::kInvalidInput,
                          "unknown term " + arg + " in action " + schema.name);
            }
          }
        }
      };
      check_atoms(schema.preconditions);
      check_atoms(schema.add_effects);
      check_atoms(schema.del_effects);
      for (auto& a : schema.add_effects) {
        if (std::binary_search(schema.del_effects.begin(),
                               schema.del_effects.end(), a)) {
          throw Error(ErrorCategory::kInvalidInput,
                      "action " + schema.name + " adds and deletes " +
                          a.to_string());
        }
      }
    }
  }

  bool is_constant(const std::string& name) const {
    return std::any_of(task_.constants.begin(), task_.constants.end(),
                       [&](const TypedName& c) { return c.name == name; });
  }

 public:
  void check_arity(const Predicate& atom) const {
    if (task_.predicates.empty()) return;
    for (auto& sig : task_.predicates) {
      if (sig.name == atom.name) {
        if (sig.parameters.size() != atom.args.size()) {
          throw Error(ErrorCategory::kInvalidInput,
                      "arity mismatch for " + atom.to_string() + ": expected " +
                          std::to_string(sig.parameters.size()) + " arguments");
        }
        return;
      }
    }
    throw Error(ErrorCategory::kInvalidInput,
                "unknown predicate " + atom.name);
  }

 private:
  Task& task_;
};

void read_problem(const SExpr& root, Task& task, const DomainReader& domain) {
  expect_list(root, "problem");
  if (root.items.size() < 2 || !root.items[0].is_keyword("define")) {
    fail(root, "expected (define (problem ...) ...)");
  }
  const SExpr& header = expect_list(root.items[1], "problem header");
  if (header.items.size() != 2 || !header.items[0].is_keyword("problem")) {
    fail(header, "expected (problem NAME)");
  }
  task.problem_name = expect_atom(header.items[1], "problem name");
  bool saw_goal = false;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& sec = expect_list(root.items[i], "problem section");
    if (sec.items.empty() || !sec.items[0].is_atom()) {
      fail(sec, "expected section keyword");
    }
    std::string kind = sec.items[0].lowered();
    if (kind == ":domain") {
      if (sec.items.size() != 2 ||
          expect_atom(sec.items[1], "domain name") != task.domain_name) {
        fail(sec, "problem refers to a different domain");
      }
    } else if (kind == ":requirements") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        std::string req = to_lower(expect_atom(sec.items[j], "requirement"));
        if (!supported_requirements().contains(req)) {
          throw UnsupportedFeature(req);
        }
      }
    } else if (kind == ":objects") {
      task.objects = parse_typed_list(sec.items, 1);
    } else if (kind == ":init") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) {
        const SExpr& item = expect_list(sec.items[j], "initial atom");
        if (!item.items.empty() && item.items[0].is_atom() &&
            item.items[0].atom == "=") {
          // (= (total-cost) 0) is the only numeric initialisation accepted.
          if (item.items.size() == 3 && item.items[1].is_list &&
              item.items[1].items.size() == 1 &&
              item.items[1].items[0].is_keyword("total-cost")) {
            continue;
          }
          throw UnsupportedFeature(":numeric-fluents");
        }
        if (!item.items.empty() && item.items[0].is_atom()) {
          reject_construct(item.items[0]);
        }
        task.init.push_back(parse_atom(item));
      }
    } else if (kind == ":goal") {
      if (sec.items.size() != 2) fail(sec, "expected a single goal formula");
      task.goal = parse_conjunction(sec.items[1]);
      saw_goal = true;
    } else if (kind == ":metric") {
      // (:metric minimize (total-cost)) is implied by :action-costs.
    } else {
      fail(sec, "unknown problem section " + kind);
    }
  }
  if (!saw_goal || task.goal.empty()) {
    throw Error(ErrorCategory::kInvalidInput, "empty goal");
  }
  std::set<std::string> seen;
  std::set<std::string> type_names = {"object"};
  for (auto& t : task.types) type_names.insert(t.name);
  for (auto& o : task.objects) {
    if (!type_names.contains(o.type)) {
      throw Error(ErrorCategory::kInvalidInput,
                  "unknown type " + o.type + " for object " + o.name);
    }
    if (!seen.insert(o.name).second) {
      throw Error(ErrorCategory::kInvalidInput, "duplicate object " + o.name);
    }
  }
  for (auto& c : task.constants) seen.insert(c.name);
  auto check = [&](const std::vector<Predicate>& atoms) {
    for (auto& atom : atoms) {
      domain.check_arity(atom);
      for (auto& arg : atom.args) {
        if (!seen.contains(arg)) {
          throw Error(ErrorCategory::kInvalidInput,
                      "unknown object " + arg + " in " + atom.to_string());
        }
      }
    }
  };
  check(task.init);
  check(task.goal);
  sort_unique(task.init);
  sort_unique(task.goal);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Task parse_task(std::string_view domain_text, std::string_view problem_text) {
  Task task;
  DomainReader domain(task);
  auto domain_exprs = detail::parse_sexprs(domain_text);
  if (domain_exprs.size() != 1) {
    throw ParseError("expected exactly one domain definition", 1, 1);
  }
  domain.read(domain_exprs.front());
  auto problem_exprs = detail::parse_sexprs(problem_text);
  if (problem_exprs.size() != 1) {
    throw ParseError("expected exactly one problem definition", 1, 1);
  }
  read_problem(problem_exprs.front(), task, domain);
  return task;
}

Task load_task(const std::filesystem::path& domain_file,
               const std::filesystem::path& problem_file) {
  return parse_task(read_file(domain_file), read_file(problem_file));
}

}  // namespace advplan
