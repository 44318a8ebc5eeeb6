#include "advplan/windows.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "advplan/util.hpp"
#include "sexpr.hpp"

namespace advplan {

namespace {

constexpr const char* kDirectionNames[4] = {"up", "left", "right", "down"};

std::optional<int> direction_index(Cell offset) {
  for (int i = 0; i < 4; ++i) {
    if (kGridMoves[i] == offset) return i;
  }
  return std::nullopt;
}

}  // namespace

// --- grid windows ------------------------------------------------------------

std::string GridWindow::pattern() const {
  std::string out;
  const int m = n / 2;
  for (int r = 0; r < n; ++r) {
    if (r) out += '/';
    for (int c = 0; c < n; ++c) {
      out += (r == m && c == m) ? 'X' : (wall(r, c) ? '#' : '.');
    }
  }
  return out;
}

GridWindow extract_grid_window(const Grid& grid, Cell center, int n,
                               std::optional<Cell> came_from) {
  if (n < 1 || n % 2 == 0) {
    throw Error(ErrorCategory::kInvalidInput, "window size must be odd");
  }
  if (!grid.in_bounds(center)) {
    throw Error(ErrorCategory::kInvalidInput,
                "window centre out of bounds: " + center.to_string());
  }
  GridWindow w;
  w.n = n;
  w.mask.assign(static_cast<std::size_t>(n) * n, 0);
  const int m = n / 2;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (r == m && c == m) continue;
      w.mask[static_cast<std::size_t>(r) * n + c] =
          grid.is_wall({center.row + r - m, center.col + c - m});
    }
  }
  if (came_from) w.approach = direction_index(*came_from - center);
  return w;
}

GridWindow parse_grid_pattern(std::string_view pattern) {
  std::vector<std::string> rows;
  std::string current;
  for (char ch : pattern) {
    if (ch == '/') {
      rows.push_back(current);
      current.clear();
    } else {
      current += ch;
    }
  }
  rows.push_back(current);
  const int n = static_cast<int>(rows.size());
  if (n % 2 == 0) throw ParseError("window pattern must have an odd size", 1, 1);
  GridWindow w;
  w.n = n;
  w.mask.assign(static_cast<std::size_t>(n) * n, 0);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(rows[r].size()) != n) {
      throw ParseError("window pattern is not square", 1, 1);
    }
    for (int c = 0; c < n; ++c) {
      char ch = rows[r][c];
      bool center = r == n / 2 && c == n / 2;
      if (center != (ch == 'X') || (ch != '#' && ch != '.' && ch != 'X')) {
        throw ParseError(std::string("bad window cell '") + ch + "'", 1,
                         r * (n + 1) + c + 1);
      }
      w.mask[static_cast<std::size_t>(r) * n + c] = ch == '#';
    }
  }
  return w;
}

GridWindow rotate(const GridWindow& w, int quarter_turns) {
  GridWindow out = w;
  const int n = w.n;
  for (int t = 0; t < ((quarter_turns % 4) + 4) % 4; ++t) {
    GridWindow prev = out;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        out.mask[static_cast<std::size_t>(r) * n + c] = prev.wall(n - 1 - c, r);
      }
    }
    if (prev.approach) {
      Cell d = kGridMoves[*prev.approach];
      out.approach = direction_index({d.col, -d.row});
    }
  }
  return out;
}

GridWindow reflect(const GridWindow& w) {
  GridWindow out = w;
  const int n = w.n;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      out.mask[static_cast<std::size_t>(r) * n + c] = w.wall(r, n - 1 - c);
    }
  }
  if (w.approach) {
    Cell d = kGridMoves[*w.approach];
    out.approach = direction_index({d.row, -d.col});
  }
  return out;
}

namespace {

std::vector<GridWitness> symmetries(const GridMatchOptions& options) {
  std::vector<GridWitness> out;
  for (int reflected = 0; reflected <= (options.reflections ? 1 : 0); ++reflected) {
    for (int t = 0; t < 4; ++t) out.push_back({t, reflected == 1});
  }
  return out;
}

GridWindow apply(const GridWindow& w, const GridWitness& s) {
  return rotate(s.reflected ? reflect(w) : w, s.quarter_turns);
}

std::string grid_key(const GridWindow& canonical, const GridMatchOptions& options) {
  std::string key = canonical.pattern();
  if (options.match_approach) {
    key += canonical.approach ? std::string(" ") + kDirectionNames[*canonical.approach]
                              : std::string(" none");
  }
  return key;
}

// Sort key for choosing a canonical orientation: pattern, then approach.
std::pair<std::string, int> orientation_rank(const GridWindow& w) {
  return {w.pattern(), w.approach ? *w.approach : -1};
}

}  // namespace

std::optional<GridWitness> grid_windows_equivalent(const GridWindow& a,
                                                   const GridWindow& b,
                                                   GridMatchOptions options) {
  if (a.n != b.n) {
    throw Error(ErrorCategory::kInvalidInput, "window sizes differ");
  }
  for (const auto& s : symmetries(options)) {
    GridWindow image = apply(b, s);
    if (image.mask == a.mask && (!options.match_approach || image.approach == a.approach)) {
      return s;
    }
  }
  return std::nullopt;
}

GridWindow canonical_grid_window(const GridWindow& w, GridMatchOptions options) {
  std::optional<GridWindow> best;
  for (const auto& s : symmetries(options)) {
    GridWindow image = apply(w, s);
    if (!best || orientation_rank(image) < orientation_rank(*best)) best = image;
  }
  if (!options.match_approach) best->approach.reset();
  return *best;
}

// --- STRIPS windows ----------------------------------------------------------

StripsWindow extract_strips_window(const Task& task,
                                   const std::vector<State>& states,
                                   const std::vector<ActionId>& actions,
                                   std::size_t end_index, int n) {
  if (n < 2) throw Error(ErrorCategory::kInvalidInput, "window size must be at least 2");
  if (states.size() != actions.size() + 1) {
    throw Error(ErrorCategory::kInvalidInput, "trajectory needs one more state than actions");
  }
  if (end_index >= states.size()) {
    throw Error(ErrorCategory::kInvalidInput, "window end lies past the trajectory");
  }
  if (end_index + 1 < static_cast<std::size_t>(n)) {
    throw Error(ErrorCategory::kInvalidInput,
                "trajectory too short: window of " + std::to_string(n) +
                    " states cannot end at state " + std::to_string(end_index));
  }
  StripsWindow w;
  std::set<std::string> objects;
  auto note = [&](const std::vector<std::string>& args) {
    for (auto& a : args) objects.insert(a);
  };
  const std::size_t first = end_index + 1 - n;
  for (std::size_t i = first; i <= end_index; ++i) {
    std::vector<Predicate> atoms;
    for (AtomId a : states[i]) {
      atoms.push_back(task.atoms[a]);
      note(task.atoms[a].args);
    }
    w.states.push_back(std::move(atoms));
    if (i < end_index) {
      const GroundedAction& act = task.operators.at(actions[i]);
      w.actions.push_back({act.schema, act.binding});
      note(act.binding);
    }
  }
  for (auto& o : objects) {
    if (task.is_constant(o)) {
      w.constants.push_back(o);
    } else {
      w.object_types[o] = task.object_type(o).value_or("object");
    }
  }
  return w;
}

StripsWindow normalize_window(const StripsWindow& w) {
  StripsWindow out = w;
  if (w.states.empty()) return out;
  std::vector<Predicate> delta = w.states.front();
  for (auto& s : w.states) {
    std::vector<Predicate> next;
    std::set_intersection(delta.begin(), delta.end(), s.begin(), s.end(),
                          std::back_inserter(next));
    delta = std::move(next);
  }
  for (auto& s : out.states) {
    std::vector<Predicate> kept;
    std::set_difference(s.begin(), s.end(), delta.begin(), delta.end(),
                        std::back_inserter(kept));
    s = std::move(kept);
  }
  // Objects that only lived in Δ disappear with it.
  std::set<std::string> used;
  for (auto& a : out.actions) used.insert(a.args.begin(), a.args.end());
  for (auto& s : out.states) {
    for (auto& p : s) used.insert(p.args.begin(), p.args.end());
  }
  std::erase_if(out.object_types, [&](auto& kv) { return !used.count(kv.first); });
  std::erase_if(out.constants, [&](auto& c) { return !used.count(c); });
  return out;
}

StripsWindow rename_objects(const StripsWindow& w, const ObjectMap& f) {
  auto map_name = [&](const std::string& o) {
    auto it = f.find(o);
    return it == f.end() ? o : it->second;
  };
  auto map_pred = [&](const Predicate& p) {
    Predicate out{p.name, {}};
    for (auto& a : p.args) out.args.push_back(map_name(a));
    return out;
  };
  StripsWindow out;
  out.constants = w.constants;
  for (auto& a : w.actions) out.actions.push_back(map_pred(a));
  for (auto& s : w.states) {
    std::vector<Predicate> mapped;
    for (auto& p : s) mapped.push_back(map_pred(p));
    std::sort(mapped.begin(), mapped.end());
    out.states.push_back(std::move(mapped));
  }
  for (auto& [o, t] : w.object_types) out.object_types[map_name(o)] = t;
  return out;
}

StripsWindow canonical_strips_window(const StripsWindow& w) {
  ObjectMap f;
  auto visit = [&](const Predicate& p) {
    for (auto& a : p.args) {
      if (w.object_types.count(a) && !f.count(a)) {
        f[a] = "v" + std::to_string(f.size() + 1);
      }
    }
  };
  for (auto& a : w.actions) visit(a);
  for (auto& s : w.states) {
    for (auto& p : s) visit(p);
  }
  for (auto& [o, t] : w.object_types) {
    if (!f.count(o)) f[o] = "v" + std::to_string(f.size() + 1);
  }
  return rename_objects(w, f);
}

std::string strips_window_key(const StripsWindow& canonical) {
  std::string key;
  // Type list in vN order (map order would put v10 before v2).
  std::vector<std::pair<int, std::string>> typed;
  for (auto& [o, t] : canonical.object_types) {
    int index = o.size() > 1 && o[0] == 'v' ? std::atoi(o.c_str() + 1) : 0;
    typed.push_back({index, o + ":" + t});
  }
  std::sort(typed.begin(), typed.end());
  for (auto& [i, text] : typed) key += text + " ";
  key += "|";
  for (auto& c : canonical.constants) key += c + " ";
  key += "|";
  for (auto& a : canonical.actions) key += a.to_string();
  for (auto& s : canonical.states) {
    key += "|";
    for (auto& p : s) key += p.to_string();
  }
  return key;
}

std::optional<ObjectMap> strips_windows_equivalent(const StripsWindow& a,
                                                   const StripsWindow& b) {
  if (a.states.size() != b.states.size() || a.actions.size() != b.actions.size() ||
      a.object_types.size() != b.object_types.size() || a.constants != b.constants) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (a.states[i].size() != b.states[i].size()) return std::nullopt;
  }
  ObjectMap f;
  std::set<std::string> used;
  auto type_of = [](const StripsWindow& w, const std::string& o) -> const std::string* {
    auto it = w.object_types.find(o);
    return it == w.object_types.end() ? nullptr : &it->second;
  };
  // Positions in the action sequence pin most of the renaming.
  for (std::size_t i = 0; i < a.actions.size(); ++i) {
    const auto& x = a.actions[i];
    const auto& y = b.actions[i];
    if (x.name != y.name || x.args.size() != y.args.size()) return std::nullopt;
    for (std::size_t j = 0; j < x.args.size(); ++j) {
      const auto* tx = type_of(a, x.args[j]);
      const auto* ty = type_of(b, y.args[j]);
      if (!tx || !ty) {
        if (tx || ty || x.args[j] != y.args[j]) return std::nullopt;
        continue;
      }
      if (*tx != *ty) return std::nullopt;
      auto it = f.find(x.args[j]);
      if (it != f.end()) {
        if (it->second != y.args[j]) return std::nullopt;
      } else {
        if (used.count(y.args[j])) return std::nullopt;
        f[x.args[j]] = y.args[j];
        used.insert(y.args[j]);
      }
    }
  }
  std::vector<std::string> free_a, free_b;
  for (auto& [o, t] : a.object_types) {
    if (!f.count(o)) free_a.push_back(o);
  }
  for (auto& [o, t] : b.object_types) {
    if (!used.count(o)) free_b.push_back(o);
  }
  std::vector<bool> taken(free_b.size(), false);
  std::function<bool(std::size_t)> assign = [&](std::size_t i) -> bool {
    if (i == free_a.size()) return rename_objects(a, f) == b;
    const std::string& t = a.object_types.at(free_a[i]);
    for (std::size_t j = 0; j < free_b.size(); ++j) {
      if (taken[j] || b.object_types.at(free_b[j]) != t) continue;
      taken[j] = true;
      f[free_a[i]] = free_b[j];
      if (assign(i + 1)) return true;
      f.erase(free_a[i]);
      taken[j] = false;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  return f;
}

// --- tables ------------------------------------------------------------------

std::string to_string(WindowFlavor flavor) {
  return flavor == WindowFlavor::kGrid ? "grid" : "strips";
}

WindowTable::WindowTable(WindowFlavor flavor, int window_size,
                         GridMatchOptions grid_options)
    : flavor_(flavor), window_size_(window_size), grid_options_(grid_options) {}

std::int64_t WindowTable::add(const GridWindow& window, std::int64_t count) {
  if (flavor_ != WindowFlavor::kGrid || window.n != window_size_) {
    throw Error(ErrorCategory::kInvalidInput, "window does not fit this table");
  }
  // The stored representative keeps its incoming direction, expressed in the
  // canonical orientation, even when the key ignores it.
  GridWindow canonical = canonical_grid_window(window, {grid_options_.reflections, true});
  std::string key = grid_key(canonical_grid_window(window, grid_options_), grid_options_);
  auto it = index_.find(key);
  if (it != index_.end()) return entries_[it->second].count += count;
  index_[key] = entries_.size();
  entries_.push_back({key, count, canonical, std::nullopt});
  return count;
}

std::int64_t WindowTable::add(const StripsWindow& normalized, std::int64_t count) {
  if (flavor_ != WindowFlavor::kStrips ||
      static_cast<int>(normalized.size()) != window_size_) {
    throw Error(ErrorCategory::kInvalidInput, "window does not fit this table");
  }
  StripsWindow canonical = canonical_strips_window(normalized);
  std::string key = strips_window_key(canonical);
  auto it = index_.find(key);
  if (it != index_.end()) return entries_[it->second].count += count;
  index_[key] = entries_.size();
  entries_.push_back({key, count, std::nullopt, std::move(canonical)});
  return count;
}

const TableEntry* WindowTable::find_key(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const TableEntry* WindowTable::find(const GridWindow& window) const {
  if (flavor_ != WindowFlavor::kGrid || window.n != window_size_) return nullptr;
  return find_key(grid_key(canonical_grid_window(window, grid_options_), grid_options_));
}

const TableEntry* WindowTable::find(const StripsWindow& normalized) const {
  if (flavor_ != WindowFlavor::kStrips ||
      static_cast<int>(normalized.size()) != window_size_) {
    return nullptr;
  }
  return find_key(strips_window_key(canonical_strips_window(normalized)));
}

void WindowTable::sort_entries() {
  std::stable_sort(entries_.begin(), entries_.end(), [](auto& a, auto& b) {
    return a.count != b.count ? a.count > b.count : a.key < b.key;
  });
  index_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) index_[entries_[i].key] = i;
}

WindowTable WindowTable::thresholded(std::int64_t threshold) const {
  if (threshold < 0) throw Error(ErrorCategory::kInvalidInput, "negative threshold");
  WindowTable out(flavor_, window_size_, grid_options_);
  out.metadata = metadata;
  for (auto& e : entries_) {
    if (e.count >= threshold) out.entries_.push_back(e);
  }
  out.sort_entries();
  return out;
}

std::int64_t WindowTable::total_count() const {
  std::int64_t total = 0;
  for (auto& e : entries_) total += e.count;
  return total;
}

bool WindowTable::operator==(const WindowTable& other) const {
  return flavor_ == other.flavor_ && window_size_ == other.window_size_ &&
         grid_options_.reflections == other.grid_options_.reflections &&
         grid_options_.match_approach == other.grid_options_.match_approach &&
         metadata == other.metadata && entries_ == other.entries_;
}

// --- persistence ---------------------------------------------------------------

namespace {

constexpr const char* kTableMagic = "advplan-window-table 1";

std::string predicate_list(const std::vector<Predicate>& preds) {
  if (preds.empty()) return "-";
  std::string out;
  for (auto& p : preds) out += (out.empty() ? "" : " ") + p.to_string();
  return out;
}

std::vector<Predicate> parse_predicate_list(const std::string& text, int line) {
  std::vector<Predicate> out;
  if (text == "-") return out;
  for (auto& e : detail::parse_sexprs(text)) {
    if (!e.is_list || e.items.empty() || !e.items[0].is_atom()) {
      throw ParseError("expected a predicate", line, e.column);
    }
    Predicate p{e.items[0].atom, {}};
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      if (!e.items[i].is_atom()) throw ParseError("nested term", line, e.items[i].column);
      p.args.push_back(e.items[i].atom);
    }
    out.push_back(std::move(p));
  }
  return out;
}

bool has_space(const std::string& s) {
  return s.find_first_of(" \t\n\r") != std::string::npos;
}

}  // namespace

std::string format_table(const WindowTable& table) {
  std::ostringstream out;
  out << kTableMagic << "\n";
  out << "flavor " << to_string(table.flavor()) << "\n";
  out << "window-size " << table.window_size() << "\n";
  if (table.flavor() == WindowFlavor::kGrid) {
    out << "reflections " << table.grid_options().reflections << "\n";
    out << "match-approach " << table.grid_options().match_approach << "\n";
  }
  for (auto& [k, v] : table.metadata) {
    if (k.empty() || has_space(k) || v.find('\n') != std::string::npos) {
      throw Error(ErrorCategory::kInvalidInput, "metadata must be single-line: " + k);
    }
    out << "meta " << k << " " << v << "\n";
  }
  out << "entries " << table.size() << "\n";
  for (auto& e : table.entries()) {
    if (e.grid) {
      out << "grid " << e.count << " " << e.grid->pattern() << " "
          << (e.grid->approach ? kDirectionNames[*e.grid->approach] : "none") << "\n";
      continue;
    }
    const StripsWindow& w = *e.strips;
    out << "strips " << e.count << "\n";
    // Same vN order as the key.
    std::vector<std::pair<int, std::string>> typed;
    for (auto& [o, t] : w.object_types) {
      typed.push_back({std::atoi(o.c_str() + 1), o + " " + t});
    }
    std::sort(typed.begin(), typed.end());
    out << "types";
    for (auto& [i, text] : typed) out << " " << text;
    out << "\n";
    out << "constants";
    for (auto& c : w.constants) out << " " << c;
    out << "\n";
    for (auto& a : w.actions) out << "action " << a.to_string() << "\n";
    for (auto& s : w.states) out << "state " << predicate_list(s) << "\n";
    out << "end\n";
  }
  return out.str();
}

WindowTable parse_table(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(msg, static_cast<int>(pos) + 1, 1);
  };
  auto next = [&]() -> const std::string& {
    if (pos >= lines.size()) throw fail("unexpected end of table");
    return lines[pos++];
  };
  auto split_first = [](const std::string& line) {
    auto space = line.find(' ');
    if (space == std::string::npos) return std::pair<std::string, std::string>{line, ""};
    return std::pair<std::string, std::string>{line.substr(0, space), line.substr(space + 1)};
  };
  auto expect = [&](const std::string& word) {
    auto [head, rest] = split_first(next());
    --pos;
    if (head != word) throw fail("expected '" + word + "'");
    ++pos;
    return rest;
  };
  auto to_int = [&](const std::string& s) -> std::int64_t {
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      --pos;
      throw fail("bad integer '" + s + "'");
    }
  };

  if (next() != kTableMagic) {
    pos = 0;
    throw fail("not a window table (expected '" + std::string(kTableMagic) + "')");
  }
  std::string flavor_text = expect("flavor");
  WindowFlavor flavor;
  if (flavor_text == "grid") flavor = WindowFlavor::kGrid;
  else if (flavor_text == "strips") flavor = WindowFlavor::kStrips;
  else throw fail("unknown flavor " + flavor_text);
  int size = static_cast<int>(to_int(expect("window-size")));
  GridMatchOptions options;
  if (flavor == WindowFlavor::kGrid) {
    options.reflections = to_int(expect("reflections")) != 0;
    options.match_approach = to_int(expect("match-approach")) != 0;
  }
  WindowTable table(flavor, size, options);
  while (pos < lines.size() && split_first(lines[pos]).first == "meta") {
    auto [k, v] = split_first(split_first(next()).second);
    table.metadata[k] = v;
  }
  auto count = to_int(expect("entries"));
  for (std::int64_t i = 0; i < count; ++i) {
    auto [kind, rest] = split_first(next());
    std::istringstream fields(rest);
    std::string count_text;
    fields >> count_text;
    std::int64_t c = to_int(count_text);
    if (kind == "grid") {
      std::string pattern, approach;
      fields >> pattern >> approach;
      GridWindow w = parse_grid_pattern(pattern);
      if (w.n != size) throw fail("pattern size differs from window-size");
      if (approach != "none") {
        auto it = std::find(std::begin(kDirectionNames), std::end(kDirectionNames), approach);
        if (it == std::end(kDirectionNames)) throw fail("bad approach " + approach);
        w.approach = static_cast<int>(it - std::begin(kDirectionNames));
      }
      table.add(w, c);
    } else if (kind == "strips") {
      StripsWindow w;
      std::istringstream types(expect("types"));
      std::string o, t;
      while (types >> o >> t) w.object_types[o] = t;
      std::istringstream consts(expect("constants"));
      while (consts >> o) w.constants.push_back(o);
      while (pos < lines.size() && split_first(lines[pos]).first == "action") {
        int line = static_cast<int>(pos) + 1;
        auto preds = parse_predicate_list(split_first(next()).second, line);
        if (preds.size() != 1) throw fail("one action per line");
        w.actions.push_back(preds.front());
      }
      while (pos < lines.size() && split_first(lines[pos]).first == "state") {
        int line = static_cast<int>(pos) + 1;
        auto preds = parse_predicate_list(split_first(next()).second, line);
        std::sort(preds.begin(), preds.end());
        w.states.push_back(std::move(preds));
      }
      if (next() != "end") {
        --pos;
        throw fail("expected 'end'");
      }
      if (static_cast<int>(w.states.size()) != size ||
          w.actions.size() + 1 != w.states.size()) {
        throw fail("window shape does not match window-size");
      }
      table.add(w, c);
    } else {
      --pos;
      throw fail("unknown entry kind '" + kind + "'");
    }
  }
  if (pos != lines.size()) throw fail("trailing content");
  table.sort_entries();
  return table;
}

void save_table(const WindowTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path);
  out << format_table(table);
  if (!out) throw Error(ErrorCategory::kIo, "write failed: " + path);
}

WindowTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_table(buffer.str());
}

// --- table construction --------------------------------------------------------

namespace {

struct InstanceWindow {
  enum Kind { kUnsolved, kNoGain, kTooShort, kWindow } kind = kNoGain;
  std::optional<GridWindow> grid;
  std::optional<StripsWindow> strips;
};

void record(const std::vector<InstanceWindow>& results, WindowTable& table,
            TableStats& stats) {
  for (auto& r : results) {
    ++stats.instances;
    switch (r.kind) {
      case InstanceWindow::kUnsolved: ++stats.unsolved; break;
      case InstanceWindow::kNoGain: break;
      case InstanceWindow::kTooShort:
        ++stats.adversarial;
        ++stats.too_short;
        break;
      case InstanceWindow::kWindow:
        ++stats.adversarial;
        if (r.grid) table.add(*r.grid);
        else table.add(*r.strips);
        break;
    }
  }
}

void stamp(WindowTable& table, const TableStats& stats, std::int64_t threshold) {
  table.metadata["instances"] = std::to_string(stats.instances);
  table.metadata["adversarial"] = std::to_string(stats.adversarial);
  table.metadata["too-short"] = std::to_string(stats.too_short);
  table.metadata["unsolved"] = std::to_string(stats.unsolved);
  table.metadata["threshold"] = std::to_string(threshold);
}

}  // namespace

WindowTable build_grid_table(const GridTableSpec& spec, TableStats* stats_out) {
  std::function<InstanceWindow(std::size_t)> one = [&](std::size_t i) {
    InstanceWindow out;
    MazeSpec maze = spec.maze;
    maze.seed = derive_seed(spec.maze.seed, i);
    Grid grid;
    try {
      grid = generate_maze(maze);
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::kGaveUp) throw;
      out.kind = InstanceWindow::kUnsolved;
      return out;
    }
    DStarLite agent(grid, grid.start(), spec.heuristic);
    auto path = agent.current_path();
    if (path.empty()) {
      out.kind = InstanceWindow::kUnsolved;
      return out;
    }
    const Cost base(static_cast<std::int64_t>(path.size()) - 1);
    Cost best = base;
    std::size_t best_at = 0;
    for (std::size_t j = 1; j + 1 < path.size(); ++j) {
      Grid trial = grid;
      trial.set_wall(path[j]);
      auto len = shortest_path_length(trial, trial.start(), trial.goal());
      Cost c = len ? Cost(*len) : Cost::infinite();
      // Later positions win ties.
      if (c > base && c >= best) {
        best = c;
        best_at = j;
      }
    }
    if (best_at == 0) return out;
    out.kind = InstanceWindow::kWindow;
    out.grid = extract_grid_window(grid, path[best_at], spec.n, path[best_at - 1]);
    return out;
  };
  auto results = parallel_map<InstanceWindow>(spec.count, spec.workers, one);
  WindowTable table(WindowFlavor::kGrid, spec.n, spec.options);
  TableStats stats;
  record(results, table, stats);
  stamp(table, stats, spec.threshold);
  table.metadata["corpus"] = std::to_string(spec.maze.width) + "x" +
                             std::to_string(spec.maze.height) + " p=" +
                             std::to_string(spec.maze.wall_frequency) +
                             " seed=" + std::to_string(spec.maze.seed);
  table.metadata["heuristic"] = to_string(spec.heuristic);
  if (stats_out) *stats_out = stats;
  return table.thresholded(spec.threshold);
}

WindowTable build_strips_table(const StripsTableSpec& spec,
                               const TaskGenerator& generator,
                               TableStats* stats_out) {
  std::function<InstanceWindow(std::size_t)> one = [&](std::size_t i) {
    InstanceWindow out;
    Task task = generator(i);
    if (!task.grounded) task = ground_task(std::move(task));
    auto base = solve(task, spec.planner);
    if (!base.solved()) {
      out.kind = InstanceWindow::kUnsolved;
      return out;
    }
    const auto& plan = base.plan.actions;
    Cost best = base.cost();
    std::size_t best_at = 0;  // 1-based plan position
    for (std::size_t j = 1; j <= plan.size(); ++j) {
      auto r = solve(task, spec.planner, RemovedSet({plan[j - 1]}));
      if (r.outcome == SearchOutcome::kBudgetExhausted) continue;
      Cost c = r.cost();
      if (c > base.cost() && c >= best) {
        best = c;
        best_at = j;
      }
    }
    if (best_at == 0) return out;
    if (best_at + 1 < static_cast<std::size_t>(spec.n)) {
      out.kind = InstanceWindow::kTooShort;
      return out;
    }
    std::vector<State> states{task.initial_state};
    for (ActionId a : plan) states.push_back(successor(states.back(), task.operators[a]));
    out.kind = InstanceWindow::kWindow;
    out.strips = normalize_window(extract_strips_window(task, states, plan, best_at, spec.n));
    return out;
  };
  auto results = parallel_map<InstanceWindow>(spec.count, spec.workers, one);
  WindowTable table(WindowFlavor::kStrips, spec.n);
  TableStats stats;
  record(results, table, stats);
  stamp(table, stats, spec.threshold);
  table.metadata["planner"] = spec.planner.describe();
  if (stats_out) *stats_out = stats;
  return table.thresholded(spec.threshold);
}

}  // namespace advplan
